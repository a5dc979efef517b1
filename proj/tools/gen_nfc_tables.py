#!/usr/bin/env python3
"""Regenerate src/text/nfc_tables.inc from the Unicode character database.

Emits three sorted tables used by the canonical normalizer:
  - combining classes (nonzero ccc only)
  - canonical decompositions (singletons and pairs; Hangul is algorithmic)
  - primary composition pairs (exclusions already filtered out)

Run from the repository root:  python3 tools/gen_nfc_tables.py
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE, HANGUL_S_COUNT = 0xAC00, 11172


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def main() -> int:
    ccc_entries = []
    decomp_entries = []
    comp_entries = []

    for cp in range(MAX_CP):
        ch = chr(cp)
        ccc = unicodedata.combining(ch)
        if ccc != 0:
            ccc_entries.append((cp, ccc))

        if is_hangul_syllable(cp):
            continue
        raw = unicodedata.decomposition(ch)
        if not raw or raw.startswith("<"):
            continue  # no decomposition, or compatibility-only
        parts = [int(p, 16) for p in raw.split()]
        if len(parts) == 1:
            decomp_entries.append((cp, parts[0], 0))
        elif len(parts) == 2:
            a, b = parts
            decomp_entries.append((cp, a, b))
            # A pair is a primary composite iff NFC maps it back; this
            # filters the composition-exclusion and non-starter cases.
            if unicodedata.normalize("NFC", chr(a) + chr(b)) == ch:
                comp_entries.append(((a << 32) | b, cp))
        else:
            raise AssertionError(f"unexpected decomposition arity at U+{cp:04X}")

    comp_entries.sort()

    out = sys.stdout
    out.write("// Generated by tools/gen_nfc_tables.py -- do not edit.\n")
    out.write(f"// Unicode version: {unicodedata.unidata_version}\n\n")

    out.write(f"static constexpr CccEntry kCccTable[{len(ccc_entries)}] = {{\n")
    for cp, ccc in ccc_entries:
        out.write(f"    {{0x{cp:04X}, {ccc}}},\n")
    out.write("};\n\n")

    out.write(f"static constexpr DecompEntry kDecompTable[{len(decomp_entries)}] = {{\n")
    for cp, a, b in decomp_entries:
        out.write(f"    {{0x{cp:04X}, 0x{a:04X}, 0x{b:04X}}},\n")
    out.write("};\n\n")

    out.write(f"static constexpr CompEntry kCompTable[{len(comp_entries)}] = {{\n")
    for key, cp in comp_entries:
        out.write(f"    {{0x{key:012X}ULL, 0x{cp:04X}}},\n")
    out.write("};\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
