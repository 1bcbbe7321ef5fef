"""Command-line front end.

Exit codes: 0 for an exact certificate (or a passing check), 2 when only an
interval is certified, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import core_verify
from .chain import betti_profile
from .document import field_of, load_space, read_document
from .errors import TCCertError
from .replay import ReplayFailure, replay
from .tc_engine import certify

EXIT_EXACT, EXIT_ERROR, EXIT_INTERVAL = 0, 1, 2


def _load(args):
    if args.space.startswith("bundled:"):
        doc = {"schema_version": 1, "space": {"type": "bundled", "name": args.space.split(":", 1)[1]}}
    else:
        doc = read_document(args.space)
    field = field_of(doc, args.char)
    return load_space(doc, field), field


def cmd_cohomology(args, out) -> int:
    space, field = _load(args)
    cc = space.chain_complex()
    if cc is not None:
        dims = betti_profile(cc, field)
        while len(dims) > 1 and dims[-1] == 0:
            dims.pop()
    else:
        dims = list(space.ring(field).dims)
    print(" ".join(map(str, dims)), file=out)
    return 0


def cmd_ring(args, out) -> int:
    space, field = _load(args)
    A = space.ring(field)
    print(f"# {space.name} over {field}: dims {' '.join(map(str, A.dims))}", file=out)
    for i in range(A.size):
        print(f"  [{i}] {A.label(i)} (degree {A.degrees[i]})", file=out)
    for i, j, v in A.structure_constants():
        if i == 0 or j == 0:
            continue
        if v is None:
            print(f"  {A.label(i)} * {A.label(j)} = UNKNOWN", file=out)
        elif v:
            terms = " + ".join(f"{c}*{A.label(k)}" for k, c in sorted(v.items()))
            print(f"  {A.label(i)} * {A.label(j)} = {terms}", file=out)
    for name, mc in sorted(A.marked.items()):
        print(f"  class {name} = {mc.element} [{mc.tag}]", file=out)
    return 0


def cmd_certify(args, out) -> int:
    space, field = _load(args)
    cert = certify(space, field, depth=args.depth)
    text = cert.dumps()
    replay(json.loads(text))  # every emitted certificate must replay
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    status = "exact" if cert.exact else "interval"
    print(f"# {space.name} over {field}: TC in [{cert.lower}, {cert.upper}] ({status}, route {cert.route})",
          file=out if args.out else sys.stderr)
    for r in cert.refusals:
        print(f"#   refused {r.subject}: {r.reason}", file=out if args.out else sys.stderr)
    return EXIT_EXACT if cert.exact else EXIT_INTERVAL


def cmd_verify_core(args, out) -> int:
    results = core_verify.run_all(args.max_prism_k, args.inject_fault)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=out)
    failed = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tccert", description="Certified bounds on topological complexity.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_space(sp):
        sp.add_argument("--space", required=True, help="space document (JSON) or bundled:NAME")
        sp.add_argument("--char", type=int, default=None, help="field characteristic (overrides the document)")
        return sp

    with_space(sub.add_parser("cohomology", help="print the Betti profile")).set_defaults(func=cmd_cohomology)
    with_space(sub.add_parser("ring", help="print the cohomology ring")).set_defaults(func=cmd_ring)
    c = with_space(sub.add_parser("certify", help="certify bounds on TC"))
    c.add_argument("--out", help="write the certificate here instead of standard output")
    c.add_argument("--depth", type=int, default=None, help="product search depth (default 2*dim)")
    c.set_defaults(func=cmd_certify)
    v = sub.add_parser("verify-core", help="check the prism and torus-cycle identities")
    v.add_argument("--max-prism-k", type=int, default=core_verify.DEFAULT_MAX_K)
    v.add_argument("--inject-fault", choices=core_verify.FAULTS, default=None,
                   help="negative control: corrupt one sign and expect failure")
    v.set_defaults(func=cmd_verify_core)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (TCCertError, ReplayFailure, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
