"""Independent re-checks of construction outputs shared by the unit and
acceptance suites."""
from purepairs.constructions.pathfinder import InducedPathOutcome
from purepairs.oracles import induced_path_oracle, is_induced_cycle, is_induced_path


def path_certificate_problem(g, cert, ell, lv1, lv2, relaxed=False, oracle=True):
    """None when a get_path certificate is sound, else a short reason."""
    s, t = lv1.height, lv2.height
    if cert.length != ell + s + t:
        return f"length {cert.length} != {ell + s + t}"
    allowed = set(lv1.heart | lv1.base | lv2.heart | lv2.base)
    if not set(cert.vertices) <= allowed:
        return "vertex outside the levellings"
    a1, a2 = lv1.apex, lv2.apex
    if cert.cycle != (a1 == a2):
        return "cycle flag does not match the apexes"
    if cert.cycle:
        return None if is_induced_cycle(g, cert.vertices) else "cycle has a chord"
    ends = {cert.vertices[0], cert.vertices[-1]}
    if ends != {a1, a2}:
        return "path does not join the apexes"
    if not is_induced_path(g, cert.vertices):
        return "path has a chord"
    if oracle and not induced_path_oracle(g, a1, a2, cert.length)[0]:
        return "oracle finds no induced path of that length"
    return None


def find_path_problem(g, out, b0, blocks, thr=None):
    """Re-check a find_path certificate; ``thr`` enables the counting bound."""
    if isinstance(out, InducedPathOutcome):
        if out.path[0] not in b0 or len(out.indices) != out.length:
            return "bad start or index count"
        if any(a >= b for a, b in zip(out.indices, out.indices[1:])):
            return "indices not increasing"
        if any(p not in blocks[t - 1] for p, t in zip(out.path[1:], out.indices)):
            return "vertex outside its block"
        return None if is_induced_path(g, out.path) else "path has a chord"
    union = set().union(*out.parts.values()) if out.parts else set()
    if union != set(b0):
        return "parts do not cover B_0"
    if thr is None:
        return None
    for i in range(1, out.K - out.k + 1):
        ci = out.part(i)
        for j in range(i, i + out.k + 1):
            free = [v for v in blocks[j - 1] if not any(g.has_edge(v, u) for u in ci)]
            if len(free) < thr:
                return f"block {j} has only {len(free)} vertices free of C_{i}"
    return None
