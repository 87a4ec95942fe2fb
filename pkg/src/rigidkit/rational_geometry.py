"""Exact linear algebra and convex hulls over the rationals (dimension <= 4)."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def frac_vec(v):
    return tuple(Fraction(x) for x in v)


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(a, c):
    c = Fraction(c)
    return tuple(c * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def mat_rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        col += 1
    return rank


def mat_det(rows) -> Fraction:
    rows = [list(map(Fraction, r)) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for j in range(n):
        piv = next((i for i in range(j, n) if rows[i][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != j:
            rows[j], rows[piv] = rows[piv], rows[j]
            det = -det
        det *= rows[j][j]
        for i in range(j + 1, n):
            if rows[i][j] != 0:
                f = rows[i][j] / rows[j][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[j])]
    return det


def solve_linear(rows, rhs):
    """One rational solution of rows * x = rhs, or None."""
    if not rows:
        return [] if all(x == 0 for x in rhs) else None
    m, n = len(rows), len(rows[0])
    aug = [list(map(Fraction, rows[i])) + [Fraction(rhs[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pr = aug[r]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c] / pr[c]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r_, c_ in pivots:
        x[c_] = aug[r_][n] / aug[r_][c_]
    return x


def nullspace_basis(rows):
    """Basis of the rational kernel of the matrix."""
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    aug = [list(map(Fraction, r)) for r in rows]
    piv_of_col = {}
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pr = aug[r]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c] / pr[c]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        piv_of_col[c] = r
        r += 1
    basis = []
    free = [c for c in range(n) if c not in piv_of_col]
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for c, r_ in piv_of_col.items():
            if aug[r_][fc] != 0:
                v[c] = -aug[r_][fc] / aug[r_][c]
        basis.append(tuple(v))
    return basis


def primitive_vector(v):
    """Scale a rational vector to a primitive integer vector (gcd 1)."""
    v = frac_vec(v)
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive form")
    denom = 1
    for x in v:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in ints)


def _hyperplane_through(points):
    """(normal, offset) of the affine hyperplane through the points, or None
    if they do not span one."""
    base = points[0]
    rows = [vec_sub(p, base) for p in points[1:]]
    kern = nullspace_basis(rows) if rows else []
    # kernel of the (k-1) x k difference matrix: need exactly 1 dimension
    if len(points) == 1 or mat_rank(rows) != len(base) - 1:
        return None
    normal = kern[0]
    return tuple(normal), dot(normal, base)


class HullError(ValueError):
    pass


def convex_hull_facets(points, dim=None):
    """Facets of the convex hull of full-dimensional rational points.

    Returns a list of (inward_normal, offset, frozenset(vertex indices)),
    the inward normal being a primitive integer vector with
    <n, x> >= offset on the hull.  Enumeration over affinely independent
    k-subsets; intended for desk-scale inputs in dimension <= 4.
    """
    pts = [frac_vec(p) for p in points]
    if not pts:
        raise HullError("no points")
    k = dim if dim is not None else len(pts[0])
    if k > 4:
        raise HullError("convex hull supported only up to dimension 4")
    if len(set(pts)) != len(pts):
        raise HullError("duplicate points")
    base_rows = [vec_sub(p, pts[0]) for p in pts[1:]]
    if mat_rank(base_rows) != k:
        raise HullError("points are not full-dimensional")
    facets = {}
    for subset in itertools.combinations(range(len(pts)), k):
        hp = _hyperplane_through([pts[i] for i in subset])
        if hp is None:
            continue
        normal, offset = hp
        vals = [dot(normal, p) - offset for p in pts]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            normal = tuple(-x for x in normal)
            vals = [-v for v in vals]
        else:
            continue
        normal = primitive_vector(normal)
        offset = dot(normal, pts[subset[0]])
        members = frozenset(i for i, p in enumerate(pts) if dot(normal, p) == offset)
        facets[(normal, offset)] = members
    if not facets:
        raise HullError("no supporting hyperplanes found")
    return [(n, c, mem) for (n, c), mem in sorted(facets.items())]


def extreme_points(points, dim=None):
    """Indices of the points that are vertices of the hull (active-normal rank k)."""
    pts = [frac_vec(p) for p in points]
    k = dim if dim is not None else len(pts[0])
    if k == 1:
        xs = [p[0] for p in pts]
        return sorted({xs.index(min(xs)), xs.index(max(xs))})
    facets = convex_hull_facets(pts, k)
    out = []
    for i in range(len(pts)):
        active = [n for (n, c, mem) in facets if i in mem]
        if active and mat_rank(active) == k:
            out.append(i)
    return out


def hull_edges(points, facets, dim):
    """Vertex-index pairs forming 1-faces: active shared normals have rank k-1."""
    k = dim
    if k == 1:
        return [(0, 1)] if len(points) == 2 else []
    edges = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            shared = [n for (n, c, mem) in facets if i in mem and j in mem]
            if shared and mat_rank(shared) == k - 1:
                edges.append((i, j))
    return edges


def triangulate(points, dim):
    """Triangulation of the hull into simplices (tuples of point indices).

    Fans from the first vertex over recursively triangulated facets.
    """
    pts = [frac_vec(p) for p in points]
    k = dim
    if k == 1:
        idx = extreme_points(pts, 1)
        return [tuple(idx)]
    if len(pts) == k + 1:
        return [tuple(range(len(pts)))]
    facets = convex_hull_facets(pts, k)
    apex = 0
    simplices = []
    for normal, offset, members in facets:
        if apex in members:
            continue
        mem = sorted(members)
        face_pts = [pts[i] for i in mem]
        # project out a coordinate where the normal is nonzero
        drop = next(i for i, x in enumerate(normal) if x != 0)
        proj = [tuple(x for i, x in enumerate(p) if i != drop) for p in face_pts]
        for simplex in triangulate(proj, k - 1):
            simplices.append(tuple([apex] + [mem[i] for i in simplex]))
    return simplices


def simplex_volume(vertices):
    k = len(vertices) - 1
    rows = [vec_sub(v, vertices[0]) for v in vertices[1:]]
    d = mat_det(rows)
    f = Fraction(abs(d))
    return f / math.factorial(k)


def centroid_and_volume(points, dim):
    """Exact Lebesgue centroid and volume of the hull via fan triangulation."""
    pts = [frac_vec(p) for p in points]
    total = Fraction(0)
    acc = [Fraction(0)] * dim
    for simplex in triangulate(pts, dim):
        verts = [pts[i] for i in simplex]
        vol = simplex_volume(verts)
        if vol == 0:
            continue
        c = [sum(v[i] for v in verts) / Fraction(len(verts)) for i in range(dim)]
        total += vol
        for i in range(dim):
            acc[i] += vol * c[i]
    if total == 0:
        raise HullError("degenerate polytope (zero volume)")
    return tuple(a / total for a in acc), total


def separating_functional(points, dim):
    """Rational linear functional strictly positive on conv(points), or None
    if the origin lies in the hull.

    Works inside the linear span of the points: the origin is outside the
    hull iff it is a vertex of conv(points + {0}), in which case the sum of
    the inward normals of the facets through 0 is strictly positive on
    every input point.
    """
    pts = [frac_vec(p) for p in points]
    if not pts:
        return None
    if any(all(x == 0 for x in p) for p in pts):
        return None
    # restrict to the linear span of the points
    rank = mat_rank(pts)
    if rank < dim:
        basis = []
        for p in pts:
            if mat_rank(basis + [p]) > len(basis):
                basis.append(p)
        coords = []
        for p in pts:
            sol = solve_linear([[basis[j][i] for j in range(rank)] for i in range(dim)], list(p))
            if sol is None:
                raise HullError("span computation failed")
            coords.append(tuple(sol))
        f_sub = separating_functional(coords, rank)
        if f_sub is None:
            return None
        # extend to the ambient space: find c with <c, basis_j> = f_sub_j
        rows = [list(b) for b in basis]
        c = solve_linear(rows, list(f_sub))
        if c is None:
            raise HullError("functional extension failed")
        return tuple(c)

    if dim == 1:
        xs = [p[0] for p in pts]
        if min(xs) > 0:
            return (Fraction(1),)
        if max(xs) < 0:
            return (Fraction(-1),)
        return None

    cloud = pts + [tuple(Fraction(0) for _ in range(dim))]
    zero_idx = len(pts)
    try:
        facets = convex_hull_facets(cloud, dim)
    except HullError:
        return None
    active = [(n, c, mem) for (n, c, mem) in facets if zero_idx in mem]
    if not active:
        return None  # origin interior
    if mat_rank([n for n, c, mem in active]) < dim:
        return None  # origin on a positive-dimensional face
    f = [Fraction(0)] * dim
    for n, c, mem in active:
        for i in range(dim):
            f[i] += n[i]
    if all(dot(f, p) > 0 for p in pts):
        return tuple(f)
    return None


def point_in_hull(point, points, dim):
    """Exact membership of a rational point in conv(points)."""
    q = frac_vec(point)
    shifted = [vec_sub(p, q) for p in points]
    return separating_functional(shifted, dim) is None
