"""Walk through the strong-extension pair on a, b, c, d, x.

H closes every subset except abcd, so x is forced into cl(abcd) and no
triple of a, b, c, d reaches it.  G sits inside H as a sublattice.
"""
from cvxgeo import build_lattice, check_caratheodory, find_subgeometry_embedding, is_strong_extension
from cvxgeo.gallery import strong_extension_pair


def main():
    G, H = strong_extension_pair()
    print(f"G: {len(G)} closed sets, H: {len(H)} closed sets")
    print("strong extension:", is_strong_extension(G, H).describe())
    for fam, name in ((G, "G"), (H, "H")):
        for n in (2, 3):
            print(f"{name} {check_caratheodory(fam, n).describe()}")
    emb = find_subgeometry_embedding(build_lattice(G), build_lattice(H))
    print("first embedding found:")
    print(emb)


if __name__ == "__main__":
    main()
