#!/usr/bin/env python3
"""Explore a shipped room template and check it against its gadget table.

Usage: explore_region.py KIND [INIT] [--compact] [--dump]
"""

from __future__ import annotations

import argparse
import sys
import time

from zcl.gadgets import GADGET_TYPES
from zcl.regions import region_behavior, verify_realization
from zcl.templates import template_region


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("kind", choices=sorted(GADGET_TYPES))
    ap.add_argument("init", nargs="?", default=None)
    ap.add_argument("--compact", action="store_true",
                    help="compact variant (magnet door only)")
    ap.add_argument("--dump", action="store_true",
                    help="print raw transitions, not just the quotient")
    args = ap.parse_args(argv)

    kwargs = {"compact": True} if args.compact else {}
    region = template_region(args.kind, args.init, **kwargs)
    gadget = GADGET_TYPES[args.kind]

    t0 = time.monotonic()
    behavior = region_behavior(region)
    dt = time.monotonic() - t0
    print(f"{args.kind} init={region.init_name}: "
          f"{len(behavior.configs)} configs, {behavior.block_count} classes, "
          f"{len(behavior.transitions)} raw transitions, "
          f"{behavior.explored_states} states, {dt:.2f}s")

    if args.dump:
        for tr in sorted(behavior.quotient_transitions):
            print("  class %d: %s -> %s  => class %d" % (tr[0], tr[1], tr[2], tr[3]))

    result = verify_realization(region, gadget, behavior=behavior)
    if result:
        print(f"Verified: region realizes {gadget.name}")
        print(f"  state map: {result.assignment}")
        return 0
    print(f"Mismatch: {result.reason}")
    if result.missing:
        print("  unrealized table transitions:")
        for tr in result.missing:
            print(f"    {tr[0]}: {tr[1]} -> {tr[2]}  => {tr[3]}")
    if result.offending:
        print("  offending region behavior:")
        for tr in result.offending:
            print(f"    class {tr[0]}: {tr[1]} -> {tr[2]}  => class {tr[3]}")
    return 4


if __name__ == "__main__":
    sys.exit(main())
