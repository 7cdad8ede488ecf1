"""Command-line front end.

Exit status: 0 success or property holds, 1 property fails, 2 usage or
parse error.  Every number is printed as an exact rational unless
``--decimal k`` asks for rounded display.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import acceptor as acc
from . import hmatrix as hm
from . import io
from . import montecarlo as mc
from . import transform as tf
from .automaton import StochasticAutomaton, avc, bsc, dist_prob, eta, validate
from .ratlin import RatMatrix, format_rat, rat

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Reporter:
    """Collects fields; prints them as JSON or as ``key: value`` lines."""

    def __init__(self, as_json: bool, decimal):
        self.as_json = as_json
        self.decimal = decimal
        self.fields = {}
        self.text = []
        self.notes = []

    def num(self, q):
        q = Fraction(q)
        if self.decimal is None:
            return format_rat(q)
        k = self.decimal
        scaled = round(abs(q) * 10**k)
        whole, frac = divmod(scaled, 10**k)
        sign = "-" if q < 0 and scaled else ""
        return f"{sign}{whole}.{frac:0{k}d}" if k else f"{sign}{whole}"

    def vector(self, v):
        return [self.num(x) for x in v]

    def matrix(self, m):
        rows = m.entries if isinstance(m, RatMatrix) else m
        return [self.vector(r) for r in rows]

    def put(self, key, value, line=None):
        self.fields[key] = value
        if line is None:
            if isinstance(value, bool):
                line = f"{key}: {'true' if value else 'false'}"
            elif isinstance(value, list) and value and isinstance(value[0], list):
                line = f"{key}:\n" + "\n".join("  " + " ".join(r) for r in value)
            elif isinstance(value, list):
                line = f"{key}: " + " ".join(map(str, value))
            else:
                line = f"{key}: {value}"
        self.text.append(line)

    def emit(self, out):
        for line in self.notes:
            sys.stderr.write(line + "\n")
        if self.as_json:
            out.write(json.dumps(self.fields, ensure_ascii=False, indent=2) + "\n")
        else:
            for line in self.text:
                out.write(line + "\n")


def parse_word(text):
    """``aab`` reads as three symbols, ``s1,s2`` as two; ``""`` and ``ε`` are empty."""
    if text in ("", "ε"):
        return ()
    if "," in text:
        return tuple(text.split(","))
    return tuple(text)


def _load(path, kind=None):
    obj = io.load(path)
    if kind == "transducer" and not isinstance(obj, StochasticAutomaton):
        raise UsageError(f"{path}: expected a transducer file")
    if kind == "acceptor" and not isinstance(obj, acc.StochasticAcceptor):
        raise UsageError(f"{path}: expected an acceptor file")
    return obj


def _state_list(A, text):
    """Comma-separated state names; bare integers are 1-based indices."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in A.states:
            out.append(A.states.index(tok))
        elif tok.isdigit() and 1 <= int(tok) <= A.n:
            out.append(int(tok) - 1)
        else:
            raise UsageError(f"unknown state {tok!r}")
    return out


def _start(A, args):
    if getattr(args, "dist", None):
        return [rat(x) for x in args.dist.split(",")]
    if getattr(args, "start", None):
        return _state_list(A, args.start)[0]
    return None


def _write_automaton(obj, args, rep: Reporter, key="automaton"):
    if getattr(args, "out", None):
        io.dump(obj, args.out)
        rep.put("written", args.out)
    if rep.as_json:
        rep.fields[key] = io.to_dict(obj)
    elif not getattr(args, "out", None):
        # stdout carries only the file; the other lines move to stderr
        rep.notes.extend(rep.text)
        rep.text = [io.dumps(obj).rstrip("\n")]


# ---------------------------------------------------------------- verbs


def cmd_validate(args, rep):
    obj = io.load(args.file, check=False)
    report = validate(obj) if isinstance(obj, StochasticAutomaton) else acc.validate_acceptor(obj)
    rep.put("kind", "transducer" if isinstance(obj, StochasticAutomaton) else "acceptor")
    rep.put("valid", report.ok)
    rep.fields["violations"] = report.violations
    rep.text.extend("  " + v for v in report.violations)
    return OK if report.ok else FAIL


def cmd_eta(args, rep):
    A = _load(args.file, "transducer")
    x, y = parse_word(args.input), parse_word(args.output)
    if len(x) != len(y):
        sys.stderr.write("warning: input and output lengths differ; the result is zero\n")
    rep.put("pair", f"({''.join(y) or 'ε'}|{''.join(x) or 'ε'})")
    rep.put("eta", rep.vector(eta(A, x, y)))
    pi = _start(A, args)
    if pi is not None:
        rep.put("probability", rep.num(dist_prob(A, pi, x, y)))
    return OK


def cmd_hmatrix(args, rep):
    A = _load(args.file, "transducer")
    H = hm.build_h(A)
    rep.put("labels", [str(l) for l in H.labels])
    rep.put("H", rep.matrix(H.matrix))
    rep.put("rank", H.d)
    return OK


def cmd_equiv(args, rep):
    A = _load(args.file, "transducer")
    if args.other:
        B = _load(args.other, "transducer")
        s_eq = hm.s_equivalent(A, B)
        rep.put("S-equivalent", s_eq)
        if args.covering:
            both = hm.automata_equivalent(A, B)
            rep.put("equivalent", both)
            return OK if both else FAIL
        return OK if s_eq else FAIL
    if args.states:
        i, j = _state_list(A, args.states)
        same = hm.states_equiv(A, i, j)
        rep.put("equivalent", same)
        return OK if same else FAIL
    if args.dists:
        left, right = args.dists.split(";")
        same = hm.dist_equiv(A, [rat(x) for x in left.split(",")], [rat(x) for x in right.split(",")])
        rep.put("equivalent", same)
        return OK if same else FAIL
    classes = hm.state_classes(A)
    rep.put("classes", [[A.states[i] for i in c] for c in classes], "classes: " + " ".join(
        "{" + ",".join(A.states[i] for i in c) + "}" for c in classes))
    return OK


def cmd_covers(args, rep):
    A, B = _load(args.file, "transducer"), _load(args.other, "transducer")
    cert = hm.covers(A, B)
    rep.put("covers", cert is not None)
    if cert is None:
        return FAIL
    rep.put("Q", rep.matrix(cert.Q))
    rep.put("labels", [str(l) for l in cert.labels])
    return OK


def cmd_reduce(args, rep):
    A = _load(args.file, "transducer")
    reps = _state_list(A, args.representatives) if args.representatives else None
    B, part = tf.reduce(A, reps)
    rep.put("blocks", [[A.states[i] for i in b] for b in part.blocks], "blocks: " + " ".join(
        "{" + ",".join(A.states[i] for i in b) + "}" for b in part.blocks))
    _write_automaton(B, args, rep)
    return OK


def cmd_minimize(args, rep):
    A = _load(args.file, "transducer")
    B = tf.minimize(A)
    rep.put("states", list(B.states))
    _write_automaton(B, args, rep)
    return OK


def cmd_classify(args, rep):
    A = _load(args.file, "transducer")
    r = tf.classify(A)
    for k, v in r.flags().items():
        rep.put(k, v)
    rep.put("simplex_dimension", r.simplex_dimension)
    return OK


def cmd_to_moore(args, rep):
    A = _load(args.file, "transducer")
    B, phi = tf.to_moore(A)
    rep.put("projection", phi.named(B, A), "projection: " + " ".join(f"{k}>{v}" for k, v in phi.named(B, A).items()))
    _write_automaton(B, args, rep)
    return OK


def _parse_map(text):
    pairs = {}
    for item in text.split(","):
        if ">" not in item:
            raise UsageError(f"map entry {item!r} is not of the form s>t")
        s, t = item.split(">", 1)
        pairs[s.strip()] = t.strip()
    return pairs


def cmd_check_hom(args, rep):
    A, B = _load(args.file, "transducer"), _load(args.other, "transducer")
    try:
        phi = tf.StateMapping.from_names(A, B, _parse_map(args.map))
    except (KeyError, ValueError) as e:
        raise UsageError(str(e)) from None
    ok = tf.check_s_homomorphism(A, B, phi)
    rep.put("S-homomorphism", ok)
    return OK if ok else FAIL


def cmd_isomorphic(args, rep):
    A, B = _load(args.file, "transducer"), _load(args.other, "transducer")
    phi = tf.is_isomorphic(A, B)
    rep.put("isomorphic", phi is not None)
    if phi is None:
        return FAIL
    named = phi.named(A, B)
    rep.put("bijection", named, "bijection: " + " ".join(f"{k}>{v}" for k, v in named.items()))
    return OK


def cmd_accept(args, rep):
    A = _load(args.file, "acceptor")
    p = acc.accept_prob(A, parse_word(args.word))
    rep.put("probability", rep.num(p))
    if args.cutpoint is not None:
        member = p > rat(args.cutpoint)
        rep.put("member", member)
        return OK if member else FAIL
    return OK


def _word_text(w):
    return "".join(w) if all(len(a) == 1 for a in w) else ",".join(w)


def cmd_lang(args, rep):
    A = _load(args.file, "acceptor")
    sample = acc.enumerate_language(A, args.cutpoint, args.maxlen, args.budget)
    words = [_word_text(w) or "ε" for w in sample.accepted]
    rep.put("count", len(words))
    rep.put("members", words, "members:" + "".join(f"\n  {w}" for w in words))
    return OK


def cmd_determinize0(args, rep):
    A = _load(args.file, "acceptor")
    _write_automaton(acc.determinize_zero(A, full_powerset=args.full_powerset), args, rep)
    return OK


def cmd_rescale(args, rep):
    A = _load(args.file, "acceptor")
    _write_automaton(acc.rescale_cutpoint(A, args.src, args.dst), args, rep)
    return OK


def cmd_normalize_init(args, rep):
    A = _load(args.file, "acceptor")
    _write_automaton(acc.normalize_initial(A, args.cutpoint), args, rep)
    return OK


def cmd_padic(args, rep):
    _write_automaton(acc.padic(args.base), args, rep)
    return OK


def cmd_isolation(args, rep):
    A = _load(args.file, "acceptor")
    g = acc.isolation_gap(A, args.cutpoint, args.maxlen, args.budget)
    rep.put("gap", rep.num(g.gap))
    rep.put("witness", _word_text(g.witness) or "ε")
    return OK if g.gap > 0 else FAIL


def cmd_nerode(args, rep):
    A = _load(args.file, "acceptor")
    k = acc.distinguishability_classes(A, args.cutpoint, args.prefix, args.suffix, args.budget)
    rep.put("classes", k)
    return OK


def cmd_simulate(args, rep):
    A = _load(args.file)
    cfg = mc.SimConfig(args.samples, args.seed, args.replicas)
    x = parse_word(args.word)
    if isinstance(A, acc.StochasticAcceptor):
        est = mc.estimate_accept(A, x, cfg)
        exact = acc.accept_prob(A, x)
    else:
        if args.output is None:
            raise UsageError("simulate on a transducer needs --output")
        y = parse_word(args.output)
        pi = _start(A, args)
        pi = 0 if pi is None else pi
        est = mc.estimate_prob(A, pi, x, y, cfg)
        exact = dist_prob(A, pi, x, y)
    rep.put("samples", cfg.samples)
    rep.put("seed", cfg.seed)
    rep.put("empirical", rep.num(est.frequency))
    rep.put("exact", rep.num(exact))
    inside = est.within(exact)
    rep.put("within_4sigma", inside)
    return OK if inside else FAIL


def cmd_channel(args, rep):
    if args.channel == "bsc":
        A = bsc(args.p)
    else:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                doc = json.load(fh)
            states, inputs, outputs = doc["states"], doc["input"], doc["output"]
            emission = {(a, s): law for a, by_state in doc["emission"].items() for s, law in by_state.items()}
            A = avc(emission, RatMatrix(doc["drift"]), states, inputs, outputs)
        except (OSError, KeyError, json.JSONDecodeError) as e:
            raise io.ParseError(f"{args.spec}: {e}") from None
    _write_automaton(A, args, rep)
    return OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # global flags are accepted before or after the verb
        g = argparse.ArgumentParser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
        g.add_argument("--budget", type=int, default=d(None), help="enumeration budget (default from STOCHAUTO_BUDGET or 10^6)")
        g.add_argument("--decimal", type=int, default=d(None), metavar="K", help="round displayed numbers to K digits")
        return g

    common = flags(True)
    p = argparse.ArgumentParser(prog="stochauto", description="Exact analysis of stochastic automata.", parents=[flags(False)])
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help, files=1):
        s = sub.add_parser(name, help=help, parents=[common])
        if files >= 1:
            s.add_argument("file")
        if files == 2:
            s.add_argument("other")
        s.set_defaults(func=func)
        return s

    def out(s):
        s.add_argument("-o", "--out", help="write the result to this file")

    verb("validate", cmd_validate, "check kernel and vector invariants")
    s = verb("eta", cmd_eta, "result vector of a word pair")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--start", help="start state")
    s.add_argument("--dist", help="start distribution, comma separated")
    verb("hmatrix", cmd_hmatrix, "canonical basis of result vectors")
    s = verb("equiv", cmd_equiv, "state, distribution or automaton equivalence")
    s.add_argument("other", nargs="?")
    s.add_argument("--states", help="two states s,t")
    s.add_argument("--dists", help="two distributions 'p1,p2;q1,q2'")
    s.add_argument("--covering", action="store_true", help="decide mutual covering instead of S-equivalence")
    verb("covers", cmd_covers, "stochastic matrix Q with eta_B = Q eta_A", files=2)
    s = verb("reduce", cmd_reduce, "merge equivalent states")
    s.add_argument("--representatives", help="one state per class, comma separated")
    out(s)
    out(verb("minimize", cmd_minimize, "remove states that mix others"))
    verb("classify", cmd_classify, "structural flags")
    out(verb("to-moore", cmd_to_moore, "equivalent Moore automaton"))
    s = verb("check-hom", cmd_check_hom, "verify a state map", files=2)
    s.add_argument("--map", required=True, help='"s1>t1,s2>t2,..."')
    verb("isomorphic", cmd_isomorphic, "search a kernel-preserving bijection", files=2)
    s = verb("accept", cmd_accept, "acceptance probability of a word")
    s.add_argument("--word", required=True)
    s.add_argument("--cutpoint")
    s = verb("lang", cmd_lang, "words above a cut point")
    s.add_argument("--cutpoint", required=True)
    s.add_argument("--maxlen", type=int, required=True)
    s = verb("determinize0", cmd_determinize0, "deterministic acceptor for cut point 0")
    s.add_argument("--full-powerset", action="store_true")
    out(s)
    s = verb("rescale", cmd_rescale, "move the cut point")
    s.add_argument("--from", dest="src", required=True)
    s.add_argument("--to", dest="dst", required=True)
    out(s)
    s = verb("normalize-init", cmd_normalize_init, "single start state")
    s.add_argument("--cutpoint", required=True)
    out(s)
    s = verb("padic", cmd_padic, "p-adic acceptor", files=0)
    s.add_argument("--base", type=int, required=True)
    out(s)
    s = verb("isolation", cmd_isolation, "smallest distance to the cut point")
    s.add_argument("--cutpoint", required=True)
    s.add_argument("--maxlen", type=int, required=True)
    s = verb("nerode", cmd_nerode, "distinguishable prefix classes")
    s.add_argument("--cutpoint", required=True)
    s.add_argument("--prefix", type=int, required=True)
    s.add_argument("--suffix", type=int, required=True)
    s = verb("simulate", cmd_simulate, "Monte Carlo estimate next to the exact value")
    s.add_argument("--word", required=True)
    s.add_argument("--output")
    s.add_argument("--start")
    s.add_argument("--dist")
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--replicas", type=int, default=1)
    s = verb("channel", cmd_channel, "emit a channel model", files=0)
    s.add_argument("channel", choices=["bsc", "avc"])
    s.add_argument("--p", help="crossover probability (bsc)")
    s.add_argument("--spec", help="emission/drift description (avc)")
    out(s)
    return p


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    if args.verb == "channel":
        if args.channel == "bsc" and args.p is None:
            sys.stderr.write("channel bsc needs --p\n")
            return USAGE
        if args.channel == "avc" and args.spec is None:
            sys.stderr.write("channel avc needs --spec\n")
            return USAGE
    rep = Reporter(args.json, args.decimal)
    try:
        code = args.func(args, rep)
    except (io.ParseError, UsageError, hm.BudgetExceeded) as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE
    rep.emit(stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
