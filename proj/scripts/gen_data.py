#!/usr/bin/env python3
"""Regenerates the checked-in base-graph and mapping fixture files under data/.

Edge positions and shift coefficients follow 3GPP TS 38.212 (BG1 with the
Z=240 lifting-set column, BG2 with the Z=20 lifting-set column); shifts are
stored reduced modulo the file's lifting size.  The mapping fixtures are the
published two-block mappings for BG1 (R=22/46) and BG2 (R=10/24); published
indices enumerate transmitted VNs, so raw column index = published index + 2
(the two punctured columns come first and are marked P).
"""

import sys
from pathlib import Path

# row -> {col: shift}   (shift already chosen for the target lifting size)
BG1_Z = 240
BG1 = {
    0: {0: 135, 1: 227, 2: 126, 3: 134, 5: 84, 6: 83, 9: 53, 10: 225, 11: 205,
        12: 128, 13: 75, 15: 135, 16: 217, 18: 245, 19: 26, 20: 241, 21: 91,
        22: 1, 23: 0},
    1: {0: 96, 2: 236, 3: 136, 4: 221, 5: 128, 7: 92, 8: 172, 9: 56, 11: 11,
        12: 189, 14: 95, 15: 85, 16: 153, 17: 87, 19: 163, 21: 216, 22: 0,
        23: 0, 24: 0},
    2: {0: 189, 1: 4, 2: 225, 4: 151, 5: 236, 6: 117, 7: 179, 8: 92, 9: 24,
        10: 68, 13: 6, 14: 101, 15: 33, 17: 96, 18: 125, 19: 67, 20: 230,
        24: 0, 25: 0},
    3: {0: 128, 1: 23, 3: 162, 4: 220, 6: 43, 7: 186, 8: 96, 10: 1, 11: 216,
        12: 22, 13: 24, 14: 167, 16: 200, 17: 32, 18: 235, 20: 172, 21: 219,
        22: 0, 25: 0},
    4: {0: 78, 1: 70, 26: 0},
    5: {0: 205, 1: 236, 3: 194, 12: 231, 16: 28, 21: 123, 22: 115, 27: 0},
    6: {0: 183, 6: 22, 10: 28, 11: 67, 13: 244, 17: 11, 18: 157, 20: 211, 28: 0},
    7: {0: 220, 1: 44, 4: 159, 7: 31, 8: 167, 14: 104, 29: 0},
    8: {0: 112, 1: 4, 3: 7, 12: 211, 16: 102, 19: 164, 21: 109, 22: 241,
        24: 90, 30: 0},
    9: {0: 103, 1: 182, 10: 109, 11: 21, 13: 142, 17: 14, 18: 61, 20: 216, 31: 0},
    10: {1: 98, 2: 149, 4: 167, 7: 160, 8: 49, 14: 58, 32: 0},
    11: {0: 77, 1: 41, 12: 83, 16: 182, 21: 78, 22: 252, 23: 22, 33: 0},
    12: {0: 160, 1: 42, 10: 21, 11: 32, 13: 234, 18: 7, 34: 0},
    13: {0: 177, 3: 248, 7: 151, 20: 185, 23: 62, 35: 0},
    14: {0: 206, 12: 55, 15: 206, 16: 127, 17: 16, 21: 229, 36: 0},
    15: {0: 40, 1: 96, 10: 65, 13: 63, 18: 75, 25: 179, 37: 0},
    16: {1: 64, 3: 49, 11: 49, 20: 51, 22: 154, 38: 0},
    17: {0: 7, 14: 164, 16: 59, 17: 1, 21: 144, 39: 0},
    18: {1: 42, 12: 233, 13: 8, 18: 155, 19: 147, 40: 0},
    19: {0: 60, 1: 73, 7: 72, 8: 127, 10: 224, 41: 0},
    20: {0: 151, 3: 186, 9: 217, 11: 47, 22: 160, 42: 0},
    21: {1: 249, 5: 121, 16: 109, 20: 131, 21: 171, 43: 0},
    22: {0: 64, 12: 142, 13: 188, 17: 158, 44: 0},
    23: {1: 156, 2: 147, 10: 170, 18: 152, 45: 0},
    24: {0: 112, 3: 86, 4: 236, 11: 116, 22: 222, 46: 0},
    25: {1: 23, 6: 136, 7: 116, 14: 182, 47: 0},
    26: {0: 195, 2: 243, 4: 215, 15: 61, 48: 0},
    27: {1: 25, 6: 104, 8: 194, 49: 0},
    28: {0: 128, 4: 165, 19: 181, 21: 63, 50: 0},
    29: {1: 86, 14: 236, 18: 84, 25: 6, 51: 0},
    30: {0: 216, 10: 73, 13: 120, 24: 9, 52: 0},
    31: {1: 95, 7: 177, 22: 172, 25: 61, 53: 0},
    32: {0: 221, 12: 112, 14: 199, 24: 121, 54: 0},
    33: {1: 2, 2: 187, 11: 41, 21: 211, 55: 0},
    34: {0: 127, 7: 167, 15: 164, 17: 159, 56: 0},
    35: {1: 161, 6: 197, 12: 207, 22: 103, 57: 0},
    36: {0: 37, 14: 105, 15: 51, 18: 120, 58: 0},
    37: {1: 198, 13: 220, 23: 122, 59: 0},
    38: {0: 167, 9: 151, 10: 157, 12: 163, 60: 0},
    39: {1: 173, 3: 139, 7: 149, 19: 0, 61: 0},
    40: {0: 157, 8: 137, 17: 149, 62: 0},
    41: {1: 167, 3: 173, 9: 139, 18: 151, 63: 0},
    42: {0: 149, 4: 157, 24: 137, 64: 0},
    43: {1: 151, 16: 163, 18: 173, 25: 139, 65: 0},
    44: {0: 139, 7: 157, 9: 163, 22: 173, 66: 0},
    45: {1: 149, 6: 151, 10: 167, 67: 0},
}

BG2_Z = 20
BG2 = {
    0: {0: 0, 1: 0, 2: 0, 3: 0, 6: 0, 9: 0, 10: 0, 11: 0},
    1: {0: 137, 3: 124, 4: 0, 5: 0, 6: 88, 7: 0, 8: 0, 9: 55, 11: 0, 12: 0},
    2: {0: 20, 1: 94, 3: 99, 4: 9, 8: 108, 10: 1, 12: 0, 13: 0},
    3: {1: 38, 2: 15, 4: 102, 5: 146, 6: 12, 7: 57, 8: 53, 9: 46, 10: 0, 13: 0},
    4: {0: 0, 1: 136, 11: 157, 14: 0},
    5: {0: 0, 1: 131, 5: 142, 7: 141, 11: 64, 15: 0},
    6: {0: 0, 5: 124, 7: 99, 9: 45, 11: 148, 16: 0},
    7: {1: 0, 5: 45, 7: 148, 11: 96, 13: 78, 17: 0},
    8: {0: 0, 1: 65, 12: 87, 18: 0},
    9: {1: 0, 8: 97, 10: 51, 11: 85, 19: 0},
    10: {0: 0, 1: 17, 6: 156, 7: 20, 20: 0},
    11: {0: 0, 7: 7, 9: 4, 13: 2, 21: 0},
    12: {1: 0, 3: 113, 11: 48, 22: 0},
    13: {0: 0, 1: 112, 8: 102, 13: 26, 23: 0},
    14: {1: 0, 6: 138, 11: 57, 13: 27, 24: 0},
    15: {0: 0, 10: 73, 11: 99, 25: 0},
    16: {1: 0, 9: 79, 11: 111, 12: 143, 26: 0},
    17: {1: 0, 5: 24, 11: 109, 12: 18, 27: 0},
    18: {0: 0, 6: 18, 7: 86, 28: 0},
    19: {0: 0, 1: 158, 10: 154, 29: 0},
    20: {1: 0, 4: 148, 11: 104, 30: 0},
    21: {0: 0, 8: 17, 13: 33, 31: 0},
    22: {1: 0, 2: 4, 32: 0},
    23: {0: 0, 3: 75, 5: 158, 33: 0},
    24: {1: 0, 2: 69, 9: 87, 34: 0},
    25: {0: 0, 5: 65, 35: 0},
    26: {2: 0, 7: 100, 12: 13, 13: 7, 36: 0},
    27: {0: 0, 6: 32, 37: 0},
    28: {1: 0, 2: 126, 5: 110, 38: 0},
    29: {0: 0, 4: 154, 39: 0},
    30: {2: 0, 5: 35, 7: 51, 9: 134, 40: 0},
    31: {1: 0, 13: 20, 41: 0},
    32: {0: 0, 5: 20, 12: 122, 42: 0},
    33: {2: 0, 7: 88, 10: 13, 43: 0},
    34: {0: 0, 12: 19, 13: 78, 44: 0},
    35: {1: 0, 5: 157, 11: 6, 45: 0},
    36: {0: 0, 2: 63, 7: 82, 46: 0},
    37: {10: 0, 13: 144, 47: 0},
    38: {1: 0, 5: 93, 11: 19, 48: 0},
    39: {0: 0, 7: 24, 12: 138, 49: 0},
    40: {2: 0, 10: 36, 13: 143, 50: 0},
    41: {1: 0, 5: 2, 11: 55, 51: 0},
}

# Published two-block mappings (indices over transmitted VNs).
TABLE1_BLOCK1 = [0, 8, 10, 14, 15, 16, 18, 20, 21, 22, 24, 25, 26, 28, 31, 32,
                 33, 36, 37, 40, 41, 43, 44]
TABLE1_BLOCK2 = [1, 2, 3, 4, 5, 6, 7, 9, 11, 12, 13, 17, 19, 23, 27, 29, 30,
                 34, 35, 38, 39, 42, 45]
TABLE2_BLOCK1 = [0, 1, 3, 8, 9, 10, 12, 13, 14, 17, 20, 23]
TABLE2_BLOCK2 = [2, 4, 5, 6, 7, 11, 15, 16, 18, 19, 21, 22]


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def canonical_payload(rows, cols, info_cols, punct, table, z):
    lines = [f"bg {rows} {cols} {info_cols} {','.join(str(p) for p in punct) or '-'}"]
    for j in sorted(table):
        for i in sorted(table[j]):
            lines.append(f"{j} {i} {table[j][i] % z}")
    return "\n".join(lines) + "\n"


def write_bg(path, name, rows, cols, info_cols, punct, table, z):
    payload = canonical_payload(rows, cols, info_cols, punct, table, z)
    checksum = fnv1a64(payload.encode())
    text = (
        f"# {name}: protograph base matrix with circulant shifts for Z={z}\n"
        f"# columns: <row> <col> <shift>; '#' lines are comments\n"
        f"# checksum fnv1a64 {checksum:016x}\n" + payload
    )
    path.write_text(text)
    n_edges = sum(len(r) for r in table.values())
    print(f"{path}: {rows}x{cols} k={info_cols} edges={n_edges} checksum={checksum:016x}")


def validate(name, table, rows, cols, info_cols, z, expect_edges):
    n_edges = sum(len(r) for r in table.values())
    assert n_edges == expect_edges, f"{name}: edge count {n_edges} != {expect_edges}"
    assert set(table) == set(range(rows)), f"{name}: row set"
    col_seen = set()
    for j, r in table.items():
        for i, s in r.items():
            assert 0 <= i < cols, f"{name}: col {i} out of range"
            col_seen.add(i)
        if j >= 4:
            ident = info_cols + 4 + (j - 4)
            assert ident in r and r[ident] % z == 0, f"{name}: row {j} identity col"
    assert col_seen == set(range(cols)), f"{name}: disconnected column"


def write_mapping(path, name, active_cols, punct, block1_tx, rate):
    # published indices are transmitted-VN indices; shift past punctured cols
    lines = [f"# {name}", f"# rate {rate}"]
    tx_cols = [c for c in range(active_cols) if c not in punct]
    blocks = {}
    for t, c in enumerate(tx_cols):
        blocks[c] = 0 if t in block1_tx else 1
    for c in range(active_cols):
        lines.append(f"v{c} {'P' if c in punct else blocks[c]}")
    path.write_text("\n".join(lines) + "\n")
    n0 = sum(1 for b in blocks.values() if b == 0)
    print(f"{path}: {len(tx_cols)} transmitted, block populations ({n0}, {len(tx_cols)-n0})")


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent
    data = root / "data"
    (data / "mappings").mkdir(parents=True, exist_ok=True)

    validate("BG1", BG1, 46, 68, 22, BG1_Z, 316)
    validate("BG2", BG2, 42, 52, 10, BG2_Z, 197)
    write_bg(data / "nr_bg1_z240.bg", "5G-NR BG1", 46, 68, 22, [0, 1], BG1, BG1_Z)
    write_bg(data / "nr_bg2_z20.bg", "5G-NR BG2", 42, 52, 10, [0, 1], BG2, BG2_Z)

    t1 = set(TABLE1_BLOCK1) | set(TABLE1_BLOCK2)
    assert t1 == set(range(46)) and not (set(TABLE1_BLOCK1) & set(TABLE1_BLOCK2))
    t2 = set(TABLE2_BLOCK1) | set(TABLE2_BLOCK2)
    assert t2 == set(range(24)) and not (set(TABLE2_BLOCK1) & set(TABLE2_BLOCK2))
    write_mapping(data / "mappings" / "nr_bg1_r22_46_m2.map",
                  "BG1 two-block mapping, R=22/46", 48, {0, 1}, set(TABLE1_BLOCK1), "22/46")
    write_mapping(data / "mappings" / "nr_bg2_r10_24_m2.map",
                  "BG2 two-block mapping, R=10/24", 26, {0, 1}, set(TABLE2_BLOCK1), "10/24")


if __name__ == "__main__":
    main()
