#!/usr/bin/env python3
"""Regenerates core/src/unicode_punct_table.inc from Python's unicodedata."""
import sys
import unicodedata


def main() -> None:
    ranges = []
    start = prev = None
    for cp in range(sys.maxunicode + 1):
        if unicodedata.category(chr(cp)).startswith("P"):
            if start is None:
                start = cp
            prev = cp
        elif start is not None:
            ranges.append((start, prev))
            start = None
    if start is not None:
        ranges.append((start, prev))
    print("// Generated from the Unicode %s character database: code point ranges whose"
          % unicodedata.unidata_version)
    print("// General_Category is P*. Regenerate with tools/gen_punct_table.py.")
    for a, b in ranges:
        print("    {0x%04X, 0x%04X}," % (a, b))


if __name__ == "__main__":
    main()
