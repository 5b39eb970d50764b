"""The five-point family that passes 2-Carousel but breaks the sharp rule,
and a check that it does not embed into a handful of small planar geometries."""
from cvxgeo import check_carousel, check_sharp_carousel_2, check_sharp_theorem_elementwise, format_family
from cvxgeo.gallery import counterexample_sharp, sharp_counterexample_planar_embedding


def main():
    F = counterexample_sharp()
    print(format_family(F), end="")
    print(check_carousel(F, 2).describe())
    print(check_sharp_carousel_2(F).describe())
    print(check_sharp_theorem_elementwise(F).describe())
    emb = sharp_counterexample_planar_embedding()
    print("planar embedding among the sample configurations:", "none" if emb is None else "found")


if __name__ == "__main__":
    main()
