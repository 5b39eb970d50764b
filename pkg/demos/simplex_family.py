"""Build D_n, C_n and G_{n+1} for n = 2 and show that phi embeds C_n into G_{n+1}.

C_n keeps n-Caratheodory but fails n-Carousel at (x, y, a_0..a_n); G_{n+1}
is a genuine point configuration one dimension up.
"""
import time

from cvxgeo import check_caratheodory, check_carousel, format_points, verify_embedding
from cvxgeo.gallery import build_Cn, build_Dn, build_Gn1, build_phi, dn_indices


def main(n=2):
    D = build_Dn(n)
    print(format_points(D), end="")
    print("distinguished (i, j):", dn_indices(D))
    C = build_Cn(n)
    print(f"C_{n}: {len(C)} closed sets")
    print(check_caratheodory(C, n).describe())
    print(check_carousel(C, n).describe())
    print(format_points(build_Gn1(n)), end="")
    t = time.perf_counter()
    print("phi:", verify_embedding(build_phi(n)).describe(), f"({time.perf_counter() - t:.2f} s)")


if __name__ == "__main__":
    main()
