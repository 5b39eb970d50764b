"""Exact hull membership with certificates, and the geometry it induces."""
from cvxgeo import PointConfig, build_geometry, format_family, hull_membership

square = [(0, 0), (2, 0), (2, 2), (0, 2)]
for x in [(1, 1), (2, 1), (3, 1)]:
    cert = hull_membership(x, square)
    if cert.inside:
        print(x, "inside, coefficients", [str(c) for c in cert.coefficients])
    else:
        normal, threshold = cert.separator
        print(x, "outside, separated by", [str(v) for v in normal], ">", threshold)

cfg = PointConfig.from_items([("a", (0, 0)), ("b", (3, 0)), ("c", (0, 3)), ("m", (1, 1))])
print(format_family(build_geometry(cfg)), end="")
