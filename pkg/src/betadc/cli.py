"""Command-line interface: beta-rep, f-inv, chern and verify."""

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .cache import ResultCache

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
SCHEMA_VERSION = 1
log = logging.getLogger("betadc")


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    prime: int
    level: int
    precision: int
    seed: int
    output: str
    cache_dir: str
    orientation: str

    def validate(self):
        from .modular.forms import supported

        if not supported(self.prime, self.level):
            raise InvalidInput(
                f"unsupported (prime, level) = ({self.prime}, {self.level}); use (2, 3) or (p >= 5, 1)"
            )
        if self.precision < 50:
            raise InvalidInput("precision must be at least 50")
        if self.orientation == "eisenstein" and self.level != 1:
            raise InvalidInput("--orientation=eisenstein requires level 1")
        return self

    def echo(self):
        d = asdict(self)
        d.pop("cache_dir")
        return d


def _config(args):
    level = args.level
    if level is None:
        level = 3 if args.prime == 2 else 1
    return RunConfig(
        args.prime, level, args.precision, args.seed, args.format, args.cache_dir, args.orientation
    ).validate()


# -- commands -------------------------------------------------------------------
def cmd_beta_rep(args, cfg):
    from .bp.beta import InvalidIndices, beta_construction

    r = args.r
    if r > 1:
        raise InvalidInput("r>1 unsupported")
    try:
        b = beta_construction(args.t, args.s, r, cfg.prime)
    except InvalidIndices as exc:
        raise InvalidInput(str(exc)) from exc
    c = b.coset
    result = {
        "element": f"beta_{{{args.t},{args.s},{r}}}",
        "prime": cfg.prime,
        "degree": c.degree,
        "x": b.x.to_text(),
        "z": b.z.to_text(),
        "raw_representative": b.raw.to_text(),
        "representative": c.representative.to_text(),
        "order": c.order,
    }
    text = [
        f"{result['element']} at p={cfg.prime}, internal degree {c.degree}",
        f"  x = {result['x']}",
        f"  z = {result['z']}",
        f"  raw representative: {result['raw_representative']}",
        f"  reduced representative: {result['representative']}",
        f"  order: {c.order}",
    ]
    return result, text, True


def _parse_generator(words):
    """'beta 4 4' | 'beta 3' | 'alpha1*alpha 3' | 'alpha1alpha 3'."""
    if not words:
        raise InvalidInput("missing generator")
    head = words[0].lower().replace("*", "").replace("_", "")
    try:
        nums = [int(w) for w in words[1:]]
    except ValueError as exc:
        raise InvalidInput(f"bad indices in {' '.join(words)!r}") from exc
    if head in ("alpha1alpha", "a1a") and len(nums) == 1:
        return "alpha", nums
    if head == "beta" and len(nums) in (1, 2):
        return "beta", nums if len(nums) == 2 else [nums[0], 1]
    raise InvalidInput(f"unrecognized generator {' '.join(words)!r}")


def cmd_f_inv(args, cfg):
    from .bp.beta import InvalidIndices, alpha1_alpha_t_representative, beta_representative
    from .finv import closed_form_alpha1_alpha, closed_form_beta_t, closed_form_kervaire_family, f_invariant
    from .modular.forms import orientation
    from .modular.igusa import structured_str
    from .verify import laures_series

    kind, nums = _parse_generator(args.generator)
    N = cfg.precision
    o = orientation(cfg.prime, cfg.level, flavor=cfg.orientation)
    try:
        if kind == "alpha":
            if cfg.prime != 2:
                raise InvalidInput("alpha1*alpha_t is supported at p=2")
            (t,) = nums
            label = f"alpha1*alpha{t}"
            coset = alpha1_alpha_t_representative(t)
            closed = closed_form_alpha1_alpha(t, N)
        else:
            t, s = nums
            label = f"beta_{{{t},{s}}}"
            coset = beta_representative(t, s, 1, cfg.prime)
            closed = None
            if s == 1 and t % cfg.prime:
                closed = closed_form_beta_t(t, o, N)
            elif cfg.prime == 2 and t % s == 0 and s & (s - 1) == 0:
                m = (t // s)
                n = s.bit_length() - 1
                if m % 2 and (m, n) != (1, 0):
                    closed = closed_form_kervaire_family(m, n, N)
    except InvalidIndices as exc:
        raise InvalidInput(str(exc)) from exc
    fc = f_invariant(coset, o, N, label=label)
    result = fc.to_json()
    text = [f"f({label}) at p={cfg.prime}, level {cfg.level}, precision {N}"]
    if fc.structured is not None:
        nf = fc.normal_form()
        text.append(f"  structured: {fc.structured_text()}")
        text.append(f"  normal form modulo ambiguity: {structured_str(nf)}")
    text.append(f"  nonzero q-coefficients (first 12): {fc.series.nonzero_positions()[:12]}")
    text.append(f"  ambiguity basis size: {fc.ambiguity.size}")
    ok = True
    if closed is not None:
        match = fc.equals(closed)
        ok = ok and match
        if closed.structured:
            result["closed_form"] = closed.structured_text()
        else:
            result["closed_form"] = f"b^{t} - (T^{cfg.prime} - T + b)^{t}, T = (alpha(v1) - q0)/{cfg.prime}, b = {o.b}"
        result["matches_closed_form"] = match
        text.append(
            f"  closed form: {result['closed_form']} -> {'match' if match else 'MISMATCH'} modulo ambiguity"
        )
    if cfg.prime == 5 and kind == "beta" and nums == [1, 1]:
        lm = fc.ambiguity.contains(fc.series - laures_series(N))
        ok = ok and lm
        result["laures_match"] = lm
        text.append(
            "  Laures form (E4-1)/25 - (1/5)((E4-1)/5)^5: " + ("match" if lm else "MISMATCH")
        )
    return result, text, ok


def cmd_verify(args, cfg):
    from .verify import SUITES, run_suite

    if args.suite not in SUITES and args.suite != "all":
        raise InvalidInput(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)} or 'all'")
    random.seed(cfg.seed)
    checks = run_suite(args.suite, cfg.precision)
    result = {"suite": args.suite, "checks": [c.to_json() for c in checks]}
    result["passed"] = all(c.ok for c in checks)
    text = []
    for c in checks:
        status = "PASS" if c.ok else "FAIL"
        timing = f"{c.seconds:.2f}s" + (f" (limit {c.limit:g}s)" if c.limit else "")
        text.append(f"{status}  {c.name}  [{timing}]  {c.detail}")
    return result, text, result["passed"]


def _chern_values(args):
    values = {}
    if args.data:
        try:
            with open(args.data, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, ValueError) as exc:
            raise InvalidInput(f"cannot read Chern data: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InvalidInput("Chern data must be a JSON object name -> integer")
        values.update(loaded)
    for item in args.values:
        name, sep, val = item.partition("=")
        if not sep:
            raise InvalidInput(f"expected NAME=VALUE, got {item!r}")
        values[name.strip()] = val.strip()
    try:
        return {k: int(v) for k, v in values.items()}
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"Chern numbers must be integers: {exc}") from exc


def cmd_chern(args, cfg):
    from .chern import (
        ChernData,
        IncompleteChernData,
        UnsupportedDimension,
        chern_reduction,
        evaluate_manifold,
        kervaire_chern_polynomial,
        polynomial_str,
    )

    dim = args.dimension
    values = _chern_values(args)
    if dim not in (4, 8):
        try:
            red = chern_reduction(dim)
        except UnsupportedDimension as exc:
            raise InvalidInput(str(exc)) from exc
        result = {
            "dimension": dim,
            "complete": red.complete,
            "unresolved": red.unresolved,
            "pool": red.pool,
        }
        text = [
            f"dimension {dim}: experimental B-reduction, complete = {red.complete}",
            f"  relations used: {', '.join(red.pool) or 'none'}",
            f"  unresolved monomials: {', '.join(red.unresolved) or 'none'}",
        ]
        return result, text, True
    data = ChernData(dim, values)
    if not values:
        poly = kervaire_chern_polynomial(dim)
        result = {"dimension": dim, "polynomial": polynomial_str(poly), "required": data.required()}
        text = [f"dimension {dim}: Kervaire invariant = {result['polynomial']} mod 2"]
        return result, text, True
    try:
        result = evaluate_manifold(data)
    except IncompleteChernData as exc:
        raise InvalidInput(str(exc)) from exc
    text = [
        f"dimension {dim}: {result['polynomial']} = {result['value']}",
        f"  parity {result['parity']}: {result['verdict']}",
    ]
    return result, text, True


COMMANDS = {"beta-rep": cmd_beta_rep, "f-inv": cmd_f_inv, "chern": cmd_chern, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="betadc", description="Beta elements, f-invariants and Kervaire criteria.")
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--level", type=int, default=None, help="3 at p=2, 1 for p >= 5 (default by prime)")
    p.add_argument("--precision", type=int, default=200, help="q-expansion precision (>= 50)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--orientation", choices=["default", "eisenstein"], default="default")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("beta-rep", help="representative of beta_{t,s,r}")
    b.add_argument("t", type=int)
    b.add_argument("s", type=int)
    b.add_argument("r", type=int, nargs="?", default=1)
    f = sub.add_parser("f-inv", help="f-invariant of a generator, e.g. 'beta 4 4' or 'alpha1*alpha 3'")
    f.add_argument("generator", nargs="+")
    c = sub.add_parser("chern", help="Kervaire parity from Chern numbers, e.g. 'chern 4 c1^(0)*c1^(1)=1'")
    c.add_argument("dimension", type=int)
    c.add_argument("values", nargs="*", help="NAME=VALUE Chern numbers")
    c.add_argument("--data", default=None, help="JSON file mapping Chern-number names to integers")
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    return p


def _cache_params(args, cfg):
    params = {"config": cfg.echo(), "command": args.command}
    for key in ("t", "s", "r", "generator", "suite", "dimension"):
        if hasattr(args, key):
            params[key] = getattr(args, key)
    return params


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _config(args)
        cache = ResultCache(cfg.cache_dir)
        params = _cache_params(args, cfg)
        cacheable = args.command not in ("verify", "chern")
        cached = cache.get(args.command, params) if cacheable else None
        if not (isinstance(cached, dict) and {"result", "text", "ok"} <= set(cached)):
            cached = None
        if cached is not None:
            result, text, ok = cached["result"], cached["text"], cached["ok"]
            log.info("cache hit")
        else:
            result, text, ok = COMMANDS[args.command](args, cfg)
            if cacheable:
                cache.put(args.command, params, {"result": result, "text": text, "ok": ok})
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.output == "json":
        doc = {
            "tool": "betadc",
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "config": cfg.echo(),
            "result": result,
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print("\n".join(text))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
