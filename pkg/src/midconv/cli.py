"""Command-line front end.

Verbs: defect, transform, run, classify, verify, higgs.  Documents are
UTF-8 JSON on --input/--output (default stdin/stdout); an input that is
a JSON *list* of documents is processed as a batch, optionally in
parallel with --jobs.

Exit codes: 0 success / constructed; 2 principled negative result (the
mathematics says no: empty, unconstructible, convention failure);
1 malformed input.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from . import higgs as higgs_mod
from . import homology, katz, moduli
from .divisors import MonodromyVector
from .docio import ProblemDocument, parse_document, parse_json, render
from .errors import (ConventionViolation, DocumentError, MidconvError,
                     ModeMismatch)
from .katz import NoneffectiveReport, TerminalStatus

OK, NEGATIVE, BAD_INPUT = 0, 2, 1


def cmd_defect(doc: ProblemDocument) -> tuple[dict, int]:
    beta = doc.convoluter_or_default()
    return {
        "kind": "defect",
        "rank": doc.vector.rank,
        "points": doc.vector.n,
        "defect": katz.defect(doc.vector, beta),
        "vector_defect": katz.defect(doc.vector),
        "convoluter": beta.to_json(),
    }, OK


def cmd_transform(doc: ProblemDocument) -> tuple[dict, int]:
    beta = doc.convoluter_or_default()
    try:
        result = katz.kappa(beta, doc.vector)
    except ConventionViolation as exc:
        report = katz.check_conventions(beta, doc.vector)
        return {"kind": "transform", "status": "ConventionFailure",
                "convention": exc.convention,
                "report": report.to_json()}, NEGATIVE
    if isinstance(result, NoneffectiveReport):
        cert = katz.detect_empty(beta, doc.vector)
        return {"kind": "transform", "status": "EmptyNoneffective",
                "report": result.to_json(),
                "certificate": cert.to_json() if cert else None}, NEGATIVE
    if isinstance(result, MonodromyVector):
        return {"kind": "transform", "status": "ok",
                "defect": katz.defect(doc.vector, beta),
                "output": result.to_json()}, OK
    return {"kind": "transform", "status": "DegenerateRank"}, NEGATIVE


def cmd_run(doc: ProblemDocument) -> tuple[dict, int]:
    max_steps = doc.max_steps if doc.max_steps is not None else doc.vector.rank
    trace = katz.run_algorithm(doc.vector, max_steps=int(max_steps),
                               v_policy=doc.v_policy)
    out = {"kind": "run", **trace.to_json()}
    negative = trace.status in (TerminalStatus.EMPTY_NONEFFECTIVE,
                                TerminalStatus.CONVENTION_FAILURE)
    return out, (NEGATIVE if negative else OK)


def cmd_classify(doc: ProblemDocument) -> tuple[dict, int]:
    report = moduli.dimension_report(doc.vector)
    out = {"kind": "classify", "report": report.to_json()}
    try:
        tag = moduli.classify_dim2(doc.vector)
        out["family"] = tag if tag is not None else "none"
    except MidconvError as exc:
        out["family"] = "none"
        out["note"] = str(exc)
    return out, OK


def cmd_verify(doc: dict) -> tuple[dict, int]:
    tol = float(doc.get("tol", homology.DEFAULT_TOL))
    if "matrices" in doc:
        inst = homology.NumericInstance.from_json(doc)
        report = homology.verify_instance(inst)
    elif "generate" in doc:
        g = doc["generate"]
        problem = homology.generate_instance(
            seed=int(g.get("seed", doc.get("seed", 0))),
            r=int(g["rank"]), n=int(g["points"]),
            aim=g.get("aim", "support"),
            v_policy=g.get("v_policy", "same"),
            tol=tol)
        report = homology.verify_instance(problem)
    else:
        parsed = parse_document(doc)
        if not parsed.assignment:
            raise DocumentError(
                "verify needs 'matrices', 'generate', or classes plus an "
                "'assignment'", "$")
        problem = _instance_from_symbolic(parsed, tol)
        report = homology.verify_instance(problem)
    out = {"kind": "verify", "report": report.to_json()}
    return out, (OK if report.ok else NEGATIVE)


def _instance_from_symbolic(parsed: ProblemDocument, tol: float):
    """Numeric instance realizing the first n-1 symbolic classes; the
    last matrix is the inverse of the product and its classes replace
    the document's last divisor (measured, as in random generation)."""
    import numpy as np
    from scipy.stats import unitary_group

    vec, beta = parsed.vector, parsed.convoluter_or_default()
    rng = np.random.default_rng(parsed.seed)
    n, r = vec.n, vec.rank
    matrices = []
    for i in range(n - 1):
        diag = []
        for elem, mult in vec[i].entries:
            diag.extend([elem.to_complex(parsed.assignment)] * mult)
        Q = unitary_group.rvs(r, random_state=rng)
        matrices.append(Q @ np.diag(diag) @ Q.conj().T)
    prod = np.eye(r, dtype=complex)
    for Mi in matrices:
        prod = prod @ Mi
    matrices.append(np.linalg.inv(prod))
    b = np.array([e.to_complex(parsed.assignment) for e in beta.h])
    w = np.array([e.to_complex(parsed.assignment) for e in beta.v])
    chi = beta.t.to_complex(parsed.assignment)
    inst = homology.NumericInstance(M=matrices, b=b, w=w, chi=chi, tol=tol)
    return inst


def cmd_higgs(doc: ProblemDocument) -> tuple[dict, int]:
    try:
        data = higgs_mod.construct(doc.vector)
    except MidconvError as exc:
        return {"kind": "higgs", "status": type(exc).__name__,
                "detail": str(exc)}, NEGATIVE
    report = higgs_mod.verify(data, doc.vector)
    forms = higgs_mod.degree_closed_forms(data)
    out = {
        "kind": "higgs",
        "status": "constructed",
        "data": data.to_json(),
        "verify": report.to_json(),
        "degree_forms": {k: str(v) for k, v in forms.items()
                         if not isinstance(v, dict)},
        "degree_forms_match": forms["matches_direct"],
    }
    return out, (OK if report.ok else NEGATIVE)


_SYMBOLIC_VERBS = {
    "defect": cmd_defect,
    "transform": cmd_transform,
    "run": cmd_run,
    "classify": cmd_classify,
    "higgs": cmd_higgs,
}


def _process_one(verb: str, doc: dict, args) -> tuple[dict, int]:
    if args.seed is not None:
        doc = {**doc, "seed": args.seed}
    if args.tol is not None:
        doc = {**doc, "tol": args.tol}
    if verb == "verify":
        return cmd_verify(doc)
    if args.max_steps is not None:
        doc = {**doc, "max_steps": args.max_steps}
    if args.beta_v is not None and args.beta_v != "explicit":
        conv = dict(doc.get("convoluter") or {})
        if conv:
            conv["v"] = {"same": "same-as-h", "fresh": "fresh"}[args.beta_v]
            doc = {**doc, "convoluter": conv}
    parsed = parse_document(doc)
    if args.beta_v == "fresh" and parsed.convoluter is None:
        parsed.v_policy = "fresh"
    return _SYMBOLIC_VERBS[verb](parsed)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="midconv",
        description="Middle convolution on local monodromy data: exact "
                    "transforms, rank reduction, dimension analytics, numeric "
                    "verification and Higgs-bundle construction.")
    parser.add_argument("verb", choices=["defect", "transform", "run",
                                         "classify", "verify", "higgs"])
    parser.add_argument("--input", default="-", help="input JSON file or '-'")
    parser.add_argument("--output", default="-", help="output JSON file or '-'")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--max-steps", type=int, default=None)
    parser.add_argument("--beta-v", choices=["same", "fresh", "explicit"],
                        default=None)
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for batch (list) inputs")
    args = parser.parse_args(argv)

    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        payload = parse_json(text)

        if isinstance(payload, list):
            worker = lambda d: _process_one(args.verb, d, args)
            if args.jobs > 1:
                with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                    results = list(pool.map(worker, payload))
            else:
                results = [worker(d) for d in payload]
            out_doc = [r[0] for r in results]
            code = max((r[1] for r in results), default=OK)
        else:
            out_doc, code = _process_one(args.verb, payload, args)
    except DocumentError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ModeMismatch as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except MidconvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return BAD_INPUT

    text = render(out_doc)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
