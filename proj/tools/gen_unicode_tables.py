#!/usr/bin/env python3
"""Regenerate core/src/unicode_tables.inc.

Emits two tables derived from the Python unicodedata database:
  - contiguous codepoint ranges whose characters are alphabetic (category L*)
  - a 1:1 lowercase map for codepoints whose lowercase form is a single
    codepoint different from the original

Run from the repository root:  python3 tools/gen_unicode_tables.py
"""

import sys
import unicodedata

OUT = "core/src/unicode_tables.inc"


def alpha_ranges():
    ranges = []
    start = None
    for cp in range(0x110000):
        if chr(cp).isalpha():
            if start is None:
                start = cp
        else:
            if start is not None:
                ranges.append((start, cp - 1))
                start = None
    if start is not None:
        ranges.append((start, 0x10FFFF))
    return ranges


def lower_map():
    pairs = []
    for cp in range(0x110000):
        low = chr(cp).lower()
        if len(low) == 1 and low != chr(cp):
            pairs.append((cp, ord(low)))
    return pairs


def main():
    ranges = alpha_ranges()
    pairs = lower_map()
    with open(OUT, "w") as f:
        f.write("// Generated by tools/gen_unicode_tables.py (unicodedata %s). Do not edit.\n"
                % unicodedata.unidata_version)
        f.write("// Alphabetic ranges (Unicode general category L*), inclusive.\n")
        f.write("static constexpr CodepointRange kAlphaRanges[] = {\n")
        for i in range(0, len(ranges), 6):
            row = ", ".join("{0x%X, 0x%X}" % r for r in ranges[i:i + 6])
            f.write("    %s,\n" % row)
        f.write("};\n\n")
        f.write("// Codepoints with a single-codepoint lowercase form differing from the input.\n")
        f.write("static constexpr CodepointPair kLowerMap[] = {\n")
        for i in range(0, len(pairs), 6):
            row = ", ".join("{0x%X, 0x%X}" % p for p in pairs[i:i + 6])
            f.write("    %s,\n" % row)
        f.write("};\n")
    print("wrote %s: %d ranges, %d lowercase pairs" % (OUT, len(ranges), len(pairs)))


if __name__ == "__main__":
    sys.exit(main())
