"""``floer-obstruct``: compute invariants and infinite-order verdicts.

    floer-obstruct surgery <knot> <1/n> [--invariants] [--verdicts]
    floer-obstruct brieskorn <a1,a2,a3[,+|-]>
    floer-obstruct sum <target> [xK] <target> ...
    floer-obstruct floer '<FloerPlus JSON>' --rohlin R
    floer-obstruct knot <knot>
    floer-obstruct eval-splitting --h H (--lef L | --red-module JSON [--endomorphism JSON])
    floer-obstruct batch <file> [--jobs N]

A ``sum`` target is a quoted or bracketed sub-target such as
``"surgery twobridge:19,3 1/1"``, ``[brieskorn 2,3,7]`` or ``brieskorn:2,3,7``,
optionally followed by a multiplier ``x3``.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import json
import re
import shlex
import sys

from . import floer_space as fs
from . import graded_roots as gr
from . import knot_invariants as ki
from . import lefschetz as lf
from . import surgery_formula as sf
from .qu_modules import fmt

REPORT_KEYS = ("d", "h", "support", "h_positive", "h_negative", "rohlin", "arf", "signature",
               "casson")
VERDICT_KEYS = ("verdict_theta_Z", "verdict_theta_Z2_mod_L", "verdict_psc_obstructed",
                "verdict_knot_concordance")


class JobError(Exception):
    pass


@dataclass
class Job:
    kind: str
    target: list
    requested: frozenset = frozenset({"invariants", "verdicts"})
    options: dict = field(default_factory=dict)


# --- target evaluation -------------------------------------------------------

def parse_slope(text):
    """``1/n``, ``-1/n`` or ``n`` style slope; returns the integer n of ``1/n``."""
    s = text.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        p, q = int(p), int(q)
        if abs(p) != 1 or q == 0:
            raise JobError("only 1/n surgeries give integral homology spheres here: %r" % text)
        return p * q
    v = int(s)
    if abs(v) != 1:
        raise JobError("integer slope must be +-1, got %r" % text)
    return v


def _surgery(knot_text, slope_text, opts):
    K = ki.parse_knot(knot_text)
    n = parse_slope(slope_text)
    M = sf.surgery_for_knot(K, n, opts.get("srange"), opts.get("trunc"))
    A = fs.ManifoldInvariants(M, ki.rohlin_surgery(K, n), "S^3_{1/%d}(%s)" % (n, K.label()))
    info = {"arf": ki.arf(K), "signature": ki.signature(K), "casson": ki.casson_surgery(K, n),
            "knot": K}
    try:
        S = gr.brieskorn_from_surgery(K, n, opts.get("fixture_data"))
    except gr.UnsupportedFamily:
        S = None
    if S is not None:
        info["brieskorn"] = S.label()
        info["cross_check"] = gr.hf_plus(S) == M
    return A, info


def _brieskorn(text, opts):
    S = gr.parse_brieskorn(text)
    A = gr.brieskorn_invariants(S)
    return A, {"casson": A.extra["casson"]}


def _explicit(text, opts):
    try:
        M = fs.FloerPlus.from_json(text)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise JobError("bad FloerPlus JSON: %s" % exc) from None
    return fs.ManifoldInvariants(M, opts.get("rohlin"), "explicit"), {}


def _split_sum_targets(tokens):
    items, cur, depth = [], None, 0
    for tok in tokens:
        if depth == 0 and tok.startswith("x") and tok[1:].isdigit() and items:
            k = int(tok[1:])
            if k < 1:
                raise JobError("multiplier must be positive")
            items.extend([items[-1]] * (k - 1))
            continue
        if depth == 0 and tok.startswith("["):
            cur, depth = [], 1
            tok = tok[1:]
        if depth:
            done = tok.endswith("]")
            if done:
                tok = tok[:-1]
            cur.extend(shlex.split(tok))
            if done:
                items.append(cur)
                depth = 0
            continue
        items.append(shlex.split(tok) if " " in tok else [tok])
    if depth:
        raise JobError("unterminated [ in sum target")
    if not items:
        raise JobError("empty connected sum")
    return items


def _sub_target(words, opts):
    head = words[0]
    if head.startswith("brieskorn:") and len(words) == 1:
        return _brieskorn(head, opts)
    if head == "brieskorn" and len(words) == 2:
        return _brieskorn(words[1], opts)
    if head == "surgery" and len(words) == 3:
        return _surgery(words[1], words[2], opts)
    if head.startswith("surgery:") and len(words) == 2:
        return _surgery(head[len("surgery:"):], words[1], opts)
    raise JobError("cannot parse sum target %r" % " ".join(words))


def _sum(tokens, opts):
    parts = [_sub_target(w, opts) for w in _split_sum_targets(tokens)]
    M = fs.connected_sum_many(A.floer for A, _ in parts)
    rhos = [A.rohlin for A, _ in parts]
    rho = sum(rhos) % 2 if all(r is not None for r in rhos) else None
    cas = [i.get("casson") for _, i in parts]
    info = {"casson": sum(cas) if all(c is not None for c in cas) else None,
            "summands": len(parts)}
    return fs.ManifoldInvariants(M, rho, "connected sum"), info


# --- verdicts ----------------------------------------------------------------

def knot_concordance_verdict(K: ki.KnotDesc):
    """Run the Z/2 obstruction on the double branched cover when that is a Brieskorn sphere."""
    if K.kind == "torus" and K.p % 2 and K.q % 2:
        S = gr.SeifertData(2, K.p, K.q, -1 if K.mirrored else 1)
        A = gr.brieskorn_invariants(S)
        return fs.infinite_order_theta_Z2_mod_L(A), S.label()
    if K.kind in ("twobridge", "figure8", "unknot"):
        # the double branched cover is a lens space, hence an L-space
        return False, "lens space"
    return None, None


def _verdicts(A: fs.ManifoldInvariants, opts, knot=None):
    out = dict.fromkeys(VERDICT_KEYS)
    M = A.floer
    h = fs.h_invariant(M)
    if M.zhs and A.rohlin is not None and h.denominator == 1:
        out["verdict_theta_Z"] = fs.infinite_order_theta_Z(A)
        out["verdict_theta_Z2_mod_L"] = fs.infinite_order_theta_Z2_mod_L(A)
    lam = opts.get("lambda_sw")
    if lam is None and opts.get("lef") is not None:
        lam, _ = lf.splitting_eval(h, opts["lef"])
    if lam is not None:
        out["verdict_psc_obstructed"] = Fraction(lam) + h != 0
    if knot is not None:
        out["verdict_knot_concordance"] = knot_concordance_verdict(knot)[0]
    return out


def _invariants(A: fs.ManifoldInvariants, info):
    M = A.floer
    out = {"d": fmt(M.d), "h": fmt(fs.h_invariant(M)),
           "support": [fmt(g) for g in sorted(fs.support(M))],
           "red": M.to_json()["red"],
           "h_positive": fs.is_h_positive(M), "h_negative": fs.is_h_negative(M),
           "rohlin": A.rohlin, "arf": info.get("arf"), "signature": info.get("signature"),
           "casson": info.get("casson")}
    for k in ("brieskorn", "cross_check", "summands"):
        if k in info:
            out[k] = info[k]
    return out


def run(job: Job) -> dict:
    opts = dict(job.options)
    if opts.get("fixture"):
        opts["fixture_data"] = gr.load_fixture(opts["fixture"])
    t = job.target
    report = {"job": job.kind, "target": " ".join(t)}
    if job.kind == "eval-splitting":
        report.update(_eval_splitting(opts))
        return report
    if job.kind == "knot":
        if len(t) != 1:
            raise JobError("knot takes one description")
        K = ki.parse_knot(t[0])
        verdict, cover = knot_concordance_verdict(K)
        report.update({"alexander": {str(j): a for j, a in ki.alexander(K).coeffs},
                       "signature": ki.signature(K), "determinant": ki.determinant(K),
                       "arf": ki.arf(K), "lspace_form": ki.is_lspace_form(ki.alexander(K)),
                       "double_branched_cover": cover, "verdict_knot_concordance": verdict})
        return report
    if job.kind == "surgery":
        if len(t) != 2:
            raise JobError("surgery takes a knot and a slope")
        A, info = _surgery(t[0], t[1], opts)
    elif job.kind == "brieskorn":
        if len(t) != 1:
            raise JobError("brieskorn takes one triple")
        A, info = _brieskorn(t[0], opts)
    elif job.kind == "sum":
        A, info = _sum(t, opts)
    elif job.kind == "floer":
        if len(t) != 1:
            raise JobError("floer takes one JSON object")
        A, info = _explicit(t[0], opts)
    else:
        raise JobError("unknown job kind %r" % job.kind)
    if A.floer.zhs and A.rohlin is not None:
        fs.check_red_parity(A)
    if "invariants" in job.requested:
        report.update(_invariants(A, info))
    if "verdicts" in job.requested:
        report.update(_verdicts(A, opts, info.get("knot")))
    return report


def _eval_splitting(opts):
    if opts.get("h") is None:
        raise JobError("eval-splitting needs --h")
    h = Fraction(opts["h"])
    if opts.get("lef") is not None:
        lef = Fraction(opts["lef"])
    elif opts.get("red_module") is not None:
        M = fs.FloerPlus.from_json(opts["red_module"])
        if fs.h_invariant(M) != h:
            raise JobError("--h does not match the module's d invariant")
        if not M.zhs:
            raise JobError("parities of HF_red need an integral homology sphere")
        ev = sum(1 for t in M.red for g in t.support() if g.numerator % 2 == 0)
        od = sum(1 for t in M.red for g in t.support() if g.numerator % 2 == 1)
        if opts.get("endomorphism") is not None:
            f = lf.Z2GradedMap.from_json(opts["endomorphism"])
            if (f.even_dim, f.odd_dim) != (ev, od):
                raise JobError("endomorphism dimensions (%d, %d) do not match HF_red (%d, %d)"
                               % (f.even_dim, f.odd_dim, ev, od))
        else:
            f = lf.Z2GradedMap.identity(ev, od)
        lef = lf.lefschetz_number(f)
    else:
        raise JobError("eval-splitting needs --lef or --red-module")
    lam, mod2 = lf.splitting_eval(h, lef)
    return {"h": fmt(h), "lef": fmt(lef), "lambda_sw": fmt(lam), "lambda_sw_mod2": mod2}


# --- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise JobError(message)


def build_parser():
    p = _Parser(prog="floer-obstruct", description="Floer-theoretic cobordism obstructions")
    # let slopes such as -1/3 through as positionals
    p._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")
    p.add_argument("command", choices=["surgery", "brieskorn", "sum", "floer", "knot",
                                       "eval-splitting", "batch"])
    p.add_argument("target", nargs="*")
    p.add_argument("--json", action="store_true", default=True, help="JSON output (default)")
    p.add_argument("--invariants", action="store_true", help="report d, h, rohlin, support, casson")
    p.add_argument("--verdicts", action="store_true", help="report the cobordism verdicts")
    p.add_argument("--trunc", type=int, help="mapping-cone truncation margin")
    p.add_argument("--srange", type=int, help="range of Alexander gradings s in the cone")
    p.add_argument("--fixture", help="orientation fixture JSON (default: bundled)")
    p.add_argument("--rohlin", type=int, help="Rohlin invariant for explicit floer inputs")
    p.add_argument("--lambda-sw", dest="lambda_sw", help="known lambda_SW, for the psc verdict")
    p.add_argument("--h", help="Froyshov invariant h (eval-splitting)")
    p.add_argument("--lef", help="Lefschetz number on HF_red (eval-splitting)")
    p.add_argument("--red-module", dest="red_module", help="FloerPlus JSON to take HF_red from")
    p.add_argument("--endomorphism", help="Z/2-graded map JSON acting on HF_red")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for batch")
    return p


def job_from_args(ns) -> Job:
    req = set()
    if ns.invariants:
        req.add("invariants")
    if ns.verdicts:
        req.add("verdicts")
    if not req:
        req = {"invariants", "verdicts"}
    opts = {k: getattr(ns, k) for k in ("trunc", "srange", "fixture", "rohlin", "lambda_sw",
                                         "h", "lef", "red_module", "endomorphism")}
    return Job(ns.command, list(ns.target), frozenset(req), opts)


def _run_line(args):
    lineno, text = args
    try:
        ns = build_parser().parse_args(shlex.split(text))
        if ns.command == "batch":
            raise JobError("nested batch files are not supported")
        rep = run(job_from_args(ns))
        rep["line"] = lineno
        return rep, False
    except Exception as exc:  # every job error is reported with its context
        return {"line": lineno, "input": text, "error": "%s: %s" % (type(exc).__name__, exc)}, True


def batch(path, jobs=1):
    """Run a newline-delimited job file; returns ``(reports, any_failed)``."""
    with open(path) as fh:
        lines = [(i + 1, ln.strip()) for i, ln in enumerate(fh)]
    work = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_line, work))
    else:
        results = [_run_line(w) for w in work]
    return [r for r, _ in results], any(bad for _, bad in results)


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        ns = build_parser().parse_args(argv)
        if ns.command == "batch":
            if len(ns.target) != 1:
                raise JobError("batch takes one file")
            reports, failed = batch(ns.target[0], ns.jobs)
            print(dumps(reports))
            return 1 if failed else 0
        print(dumps(run(job_from_args(ns))))
        return 0
    except Exception as exc:
        print(dumps({"error": "%s: %s" % (type(exc).__name__, exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
