"""Command-line front end: ``orbitkit <subcommand> ...``.

Every subcommand prints one JSON report.  Exit codes: 0 decided (yes or no),
1 a ``--verify`` check failed, 2 unknown (bound exhausted), 3 input error,
4 capacity error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import extension, matrixorbit, stallings, whitehead, words, zlattice
from .decision import SCHEMA, CapacityError, Decision, InputError
from .matrixorbit import DEFAULT_MAX_EXPONENT, DEFAULT_MODULI, OrbitQuery
from .stallings import build_subgroup_graph
from .whitehead import Automorphism, MoveSequence
from .words import Word, parse_word, word_from_json
from .zlattice import Lattice

EXIT_DECIDED = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3
EXIT_CAPACITY = 4

DEFAULT_MAX_LENGTH = 8
BIG = 2 ** 63


# -- input parsing --------------------------------------------------------

def _load(text: str):
    """``@path`` reads JSON from a file; anything else is returned unchanged."""
    if text.startswith("@"):
        try:
            return json.loads(Path(text[1:]).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {text!r}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {text!r}: {exc.msg}") from exc
    return text


def _int(token) -> int:
    if isinstance(token, bool):
        raise InputError(f"bad integer {token!r}")
    if isinstance(token, int):
        return token
    try:
        return int(str(token).strip())
    except ValueError:
        raise InputError(f"bad integer token {str(token).strip()!r}") from None


def parse_vector(text) -> list:
    data = _load(text) if isinstance(text, str) else text
    if isinstance(data, list):
        return [_int(t) for t in data]
    data = data.strip()
    if not data:
        return []
    return [_int(t) for t in data.split(",")]


def parse_matrix(text) -> list:
    """Rows separated by ``;``, entries by ``,``; or ``@file`` holding a JSON array."""
    data = _load(text) if isinstance(text, str) else text
    if isinstance(data, list):
        rows = [[_int(t) for t in r] for r in data]
    else:
        data = data.strip()
        rows = [parse_vector(r) for r in data.split(";")] if data else []
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InputError(f"ragged matrix {text!r}")
    return rows


def parse_word_arg(text, rank: int) -> Word:
    data = _load(text) if isinstance(text, str) else text
    if isinstance(data, dict):
        w = word_from_json(data)
        if w.rank != rank:
            raise InputError(f"word JSON has rank {w.rank}, expected {rank}")
        return w
    return parse_word(data, rank)


def parse_words(text, rank: int) -> list:
    data = _load(text) if isinstance(text, str) else text
    if isinstance(data, list):
        return [parse_word_arg(w, rank) for w in data]
    return [parse_word(t, rank) for t in data.split(",") if t.strip()]


def parse_moduli(text) -> tuple:
    moduli = tuple(parse_vector(text))
    if any(m < 2 for m in moduli):
        raise InputError(f"moduli must be >= 2, got {text!r}")
    return moduli


# -- output ---------------------------------------------------------------

def to_wire(obj):
    """JSON-ready form; integers beyond 64 bits become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= BIG else obj
    if isinstance(obj, Word):
        return str(obj)
    if isinstance(obj, (MoveSequence, stallings.StallingsGraph, Automorphism, extension.GElement)):
        return to_wire(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_wire(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_wire(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report(command: str, d: Decision, query: dict, config: dict | None = None) -> dict:
    out = {
        "schema": SCHEMA,
        "command": command,
        "decision": d.outcome,
        "witness": to_wire(d.witness),
        "certificate": to_wire(d.certificate),
        "bound": to_wire(d.bound),
        "query": to_wire(query),
    }
    if config:
        out["config"] = to_wire(config)
    return out


# -- subcommands ----------------------------------------------------------
# Each handler returns (decision, query, config, verifier); the verifier checks a
# previously emitted witness (already parsed from JSON) against this query.


def _rank(args) -> int:
    if args.rank < 1:
        raise InputError(f"rank must be positive, got {args.rank}")
    return args.rank


def cmd_fg_conj(args):
    r = _rank(args)
    u, v = parse_word_arg(args.u, r), parse_word_arg(args.v, r)
    d = words.conjugacy_decide(u, v)

    def verify(w):
        return words.is_conjugate_by(u, v, parse_word(w, r))

    return d, {"rank": r, "u": u, "v": v}, None, verify


def cmd_fg_orbit(args):
    r = _rank(args)
    u, v = parse_word_arg(args.u, r), parse_word_arg(args.v, r)
    d = whitehead.aut_orbit_decide(u, v, max_rank=args.max_rank, max_length=args.max_min_length)
    if d.is_yes:
        d = Decision.yes(d.witness, automorphism=d.witness.automorphism(), **d.certificate)

    def verify(w):
        return MoveSequence.from_json(w, r).apply(u) == v

    return d, {"rank": r, "u": u, "v": v}, None, verify


def cmd_fg_primitive(args):
    r = _rank(args)
    w = parse_word_arg(args.w, r)
    w_min, moves = whitehead.whitehead_minimize(w)
    if len(w_min) == 1:
        d = Decision.yes(moves, image=w_min)
    else:
        d = Decision.no("minimal-length", minimal_length=len(w_min), minimal_word=w_min)

    def verify(m):
        return whitehead.cyclic_length(MoveSequence.from_json(m, r).apply(w)) == 1

    return d, {"rank": r, "w": w}, None, verify


def cmd_fg_sod(args):
    r = _rank(args)
    x = parse_word_arg(args.x, r)
    gens = parse_words(args.gens, r)
    H = build_subgroup_graph(gens, r)
    d = whitehead.sod_aut_bounded(x, H, args.max_length)

    def verify(wit):
        h = parse_word(wit["h"], r)
        return stallings.member(H, h).is_yes and MoveSequence.from_json(wit["moves"], r).apply(x) == h

    return d, {"rank": r, "x": x, "gens": gens}, {"max_length": args.max_length}, verify


def cmd_fg_cyclic_od(args):
    r = _rank(args)
    data = _load(args.aut)
    if isinstance(data, str):
        # plain form: comma-separated images, optional '/' then inverse images
        imgs, _, inv = data.partition("/")
        data = {"images": imgs.split(","), "inverse_images": inv.split(",") if inv else None}
    data = {**data, "rank": r}
    phi = Automorphism.from_json(data)
    u, v = parse_word_arg(args.u, r), parse_word_arg(args.v, r)
    d = whitehead.cyclic_od_bounded(phi, u, v, args.max_exponent)

    def verify(wit):
        k = _int(wit["k"])
        img = u
        step = phi if k >= 0 else phi.inverse()
        for _ in range(abs(k)):
            img = step.apply(img)
        return words.is_conjugate_by(img, v, parse_word(wit["conjugator"], r))

    return d, {"rank": r, "aut": phi, "u": u, "v": v}, {"max_exponent": args.max_exponent}, verify


def cmd_stallings_member(args):
    r = _rank(args)
    gens = parse_words(args.gens, r)
    w = parse_word_arg(args.w, r)
    H = build_subgroup_graph(gens, r)
    d = stallings.member(H, w)
    d = Decision(d.outcome, d.witness, {**d.certificate, "graph": H}, d.bound)

    def verify(path):
        return H.read(w) == [_int(p) for p in path] and path[-1] == 0

    return d, {"rank": r, "gens": gens, "w": w}, None, verify


def cmd_stallings_basis(args):
    r = _rank(args)
    gens = parse_words(args.gens, r)
    H = build_subgroup_graph(gens, r)
    basis = stallings.subgroup_basis(H)
    d = Decision.yes(basis, graph=H, rank=len(basis))

    def verify(b):
        b = [parse_word(t, r) for t in b]
        return build_subgroup_graph(b, r) == H and len(b) == H.num_edges - H.num_vertices + 1

    return d, {"rank": r, "gens": gens}, None, verify


def _lattice(args, n: int | None = None) -> Lattice:
    gens = parse_matrix(args.gens) if args.gens is not None else []
    return Lattice(gens, n if n is not None else (len(gens[0]) if gens else None))


def cmd_ab_sod_gl(args):
    x = parse_vector(args.x)
    L = _lattice(args, len(x))
    d = zlattice.sod_gl(x, L)

    def verify(alpha):
        alpha = parse_matrix(alpha)
        return zlattice.is_unimodular(alpha) and zlattice.vecmat(x, alpha) in L

    return d, {"x": x, "gens": L.generators}, None, verify


def cmd_ab_tcp(args):
    A = parse_matrix(args.matrix)
    u, v = parse_vector(args.u), parse_vector(args.v)
    d = zlattice.tcp_abelian(A, u, v)

    def verify(x):
        x = parse_vector(x)
        Ax = zlattice.matvec(A, x)
        return [a - b for a, b in zip(x, Ax)] == [b - a for a, b in zip(u, v)]

    return d, {"A": A, "u": u, "v": v}, None, verify


def _is_hnf(H) -> bool:
    col = -1
    for i, row in enumerate(H):
        nz = [j for j, a in enumerate(row) if a]
        if not nz:
            if any(any(r) for r in H[i:]):
                return False
            break
        j = nz[0]
        if j <= col or row[j] <= 0:
            return False
        if any(not 0 <= H[k][j] < row[j] for k in range(i)):
            return False
        col = j
    return True


def _is_snf(D) -> bool:
    m, n = len(D), len(D[0]) if D else 0
    if any(D[i][j] for i in range(m) for j in range(n) if i != j):
        return False
    diag = [D[i][i] for i in range(min(m, n))]
    if any(x < 0 for x in diag):
        return False
    return all(b % a == 0 if a else b == 0 for a, b in zip(diag, diag[1:]))


def cmd_hnf(args):
    M = parse_matrix(args.matrix)
    H, U = zlattice.hnf(M)
    d = Decision.yes({"H": H, "U": U})

    def verify(w):
        H2, U2 = parse_matrix(w["H"]), parse_matrix(w["U"])
        return zlattice.is_unimodular(U2) and zlattice.matmul(U2, M) == H2 and _is_hnf(H2)

    return d, {"matrix": M}, None, verify


def cmd_snf(args):
    M = parse_matrix(args.matrix)
    D, U, V = zlattice.snf(M)
    d = Decision.yes({"D": D, "U": U, "V": V})

    def verify(w):
        D2, U2, V2 = (parse_matrix(w[k]) for k in "DUV")
        return (zlattice.is_unimodular(U2) and zlattice.is_unimodular(V2)
                and zlattice.matmul(zlattice.matmul(U2, M), V2) == D2 and _is_snf(D2))

    return d, {"matrix": M}, None, verify


def _orbit_query(args) -> OrbitQuery:
    if args.query is not None:
        data = _load(args.query)
        if isinstance(data, str):
            data = json.loads(data)
        q = OrbitQuery.from_json(data)
        if args.max_exponent is not None:
            q.max_exponent = args.max_exponent
        if args.moduli is not None:
            q.moduli = parse_moduli(args.moduli)
        return q
    if args.matrix is None or args.x is None:
        raise InputError("orbit-decide needs --matrix and --x (or --query)")
    A = parse_matrix(args.matrix)
    n = len(A)
    u = parse_vector(args.u) if args.u is not None else [0] * n
    return OrbitQuery(A, parse_vector(args.x), u, _lattice(args, n),
                      args.max_exponent if args.max_exponent is not None else DEFAULT_MAX_EXPONENT,
                      parse_moduli(args.moduli) if args.moduli is not None else DEFAULT_MODULI)


def _check_orbit(A, x, u, L, k) -> bool:
    k = _int(k)
    return [a - b for a, b in zip(zlattice.matvec(matrixorbit.power(A, k), x), u)] in L


def cmd_orbit_decide(args):
    q = _orbit_query(args)
    d = matrixorbit.orbit_coset_decide(q)

    def verify(k):
        return _check_orbit(q.A, q.x, q.u, q.L, k)

    return d, q.to_json(), {"max_exponent": q.max_exponent, "moduli": list(q.moduli)}, verify


def cmd_orbit_equal(args):
    A = parse_matrix(args.matrix)
    x, y = parse_vector(args.x), parse_vector(args.y)
    K = args.max_exponent if args.max_exponent is not None else DEFAULT_MAX_EXPONENT
    moduli = parse_moduli(args.moduli) if args.moduli is not None else DEFAULT_MODULI
    d = matrixorbit.orbit_equality_decide(A, x, y, K, moduli)

    def verify(k):
        return zlattice.matvec(matrixorbit.power(A, _int(k)), x) == y

    return d, {"A": A, "x": x, "y": y}, {"max_exponent": K, "moduli": list(moduli)}, verify


def _element(text) -> extension.GElement:
    """``u1,u2,...:p`` or ``@file``/JSON ``{"u": [...], "p": p}``."""
    data = _load(text)
    if isinstance(data, dict):
        try:
            return extension.GElement(parse_vector(data["u"]), _int(data["p"]))
        except KeyError as exc:
            raise InputError(f"element JSON lacks {exc.args[0]!r}") from None
    vec, sep, p = data.partition(":")
    if not sep:
        raise InputError(f"element {data!r} must look like 'u1,u2,...:p'")
    return extension.GElement(parse_vector(vec), _int(p))


def cmd_ext_cp(args):
    if args.group is not None:
        G = extension.ZnByZ.from_json(_load(args.group))
    else:
        G = extension.ZnByZ(parse_matrix(args.matrix))
    g1, g2 = _element(args.g1), _element(args.g2)
    K = args.max_exponent if args.max_exponent is not None else DEFAULT_MAX_EXPONENT
    moduli = parse_moduli(args.moduli) if args.moduli is not None else DEFAULT_MODULI
    d = extension.cp_znbyz(G, g1, g2, K, moduli)

    def verify(h):
        h = extension.GElement(parse_vector(h["u"]), _int(h["p"]))
        return G.conjugate(g1, h) == g2

    return d, {"group": G.to_json(), "g1": g1, "g2": g2}, {"max_exponent": K, "moduli": list(moduli)}, verify


# -- parser ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


_NEGATIVE = re.compile(r"^-\d[\d,;\s-]*$")


def _glue_negative_values(argv: list) -> list:
    """``--x -1,2`` becomes ``--x=-1,2`` so argparse does not read ``-1,2`` as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _bound(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bound must be an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"bound must be positive, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orbitkit", description="Exact orbit-decision procedures.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(handler=handler)
        p.add_argument("--verify", metavar="REPORT",
                       help="re-check the witness of a previous report (JSON or @file)")
        p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
        return p

    def rank(p):
        p.add_argument("--rank", type=int, required=True)

    def orbit_opts(p):
        p.add_argument("--max-exponent", type=_bound)
        p.add_argument("--moduli")

    p = add("fg-conj", cmd_fg_conj, "conjugacy in F_n")
    rank(p)
    p.add_argument("u")
    p.add_argument("v")

    p = add("fg-orbit", cmd_fg_orbit, "Aut(F_n)-orbit equivalence (Whitehead)")
    rank(p)
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--max-rank", type=_bound, default=whitehead.MAX_RANK)
    p.add_argument("--max-min-length", type=_bound, default=whitehead.MAX_MIN_LENGTH)

    p = add("fg-primitive", cmd_fg_primitive, "primitivity of an element of F_n")
    rank(p)
    p.add_argument("w")

    p = add("fg-sod", cmd_fg_sod, "bounded search for an Aut-image of x in <gens>")
    rank(p)
    p.add_argument("--x", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--max-length", type=_bound, default=DEFAULT_MAX_LENGTH)

    p = add("fg-cyclic-od", cmd_fg_cyclic_od, "bounded orbit search under <phi> up to conjugacy")
    rank(p)
    p.add_argument("--aut", required=True,
                   help="'ab,b/aB,b' (images, optional inverse images) or automorphism JSON")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--max-exponent", type=_bound, default=DEFAULT_MAX_EXPONENT)

    p = add("stallings-member", cmd_stallings_member, "membership in a subgroup of F_n")
    rank(p)
    p.add_argument("--gens", required=True)
    p.add_argument("w")

    p = add("stallings-basis", cmd_stallings_basis, "free basis of a subgroup of F_n")
    rank(p)
    p.add_argument("--gens", required=True)

    p = add("ab-sod-gl", cmd_ab_sod_gl, "is some GL_n(Z)-image of x in the lattice?")
    p.add_argument("--x", required=True)
    p.add_argument("--gens")

    p = add("ab-tcp", cmd_ab_tcp, "twisted conjugacy in Z^n")
    p.add_argument("--matrix", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)

    p = add("hnf", cmd_hnf, "Hermite normal form")
    p.add_argument("--matrix", required=True)

    p = add("snf", cmd_snf, "Smith normal form")
    p.add_argument("--matrix", required=True)

    p = add("orbit-decide", cmd_orbit_decide, "does A^k x land in u + L?")
    p.add_argument("--query", help="orbit query JSON or @file")
    p.add_argument("--matrix")
    p.add_argument("--x")
    p.add_argument("--u")
    p.add_argument("--gens")
    orbit_opts(p)

    p = add("orbit-equal", cmd_orbit_equal, "is y = A^k x for some k?")
    p.add_argument("--matrix", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    orbit_opts(p)

    p = add("ext-cp", cmd_ext_cp, "conjugacy in Z^n x|_A Z")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix")
    g.add_argument("--group", help="group JSON {n, A} or @file")
    p.add_argument("--g1", required=True, help="'u1,u2:p' or element JSON")
    p.add_argument("--g2", required=True)
    orbit_opts(p)
    return parser


def _text(rep: dict) -> str:
    lines = [f"{rep['command']}: {rep['decision']}"]
    for key in ("witness", "certificate", "bound"):
        if rep.get(key) not in (None, {}, []):
            lines.append(f"  {key}: {json.dumps(rep[key])}")
    return "\n".join(lines)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_DECIDED
    except InputError as exc:
        print(f"orbitkit: input error: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        d, query, config, verify = args.handler(args)
        if args.verify is not None:
            try:
                prior = _load(args.verify)
                if isinstance(prior, str):
                    prior = json.loads(prior)
                if prior.get("decision") == "yes":
                    ok = bool(verify(prior["witness"]))
                else:
                    ok = prior.get("decision") == d.outcome
            except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
                raise InputError(f"malformed report for --verify ({exc})") from exc
            print(json.dumps({"schema": SCHEMA, "command": args.command, "verified": ok}), file=stdout)
            return EXIT_DECIDED if ok else EXIT_REFUTED
        rep = report(args.command, d, query, config)
    except InputError as exc:
        print(f"orbitkit: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"orbitkit: capacity error: {exc}", file=stderr)
        return EXIT_CAPACITY
    except json.JSONDecodeError as exc:
        print(f"orbitkit: input error: invalid JSON ({exc.msg})", file=stderr)
        return EXIT_INPUT
    print(_text(rep) if args.format == "text" else json.dumps(rep, sort_keys=True), file=stdout)
    return EXIT_UNKNOWN if d.is_unknown else EXIT_DECIDED


def main():
    sys.exit(run())
