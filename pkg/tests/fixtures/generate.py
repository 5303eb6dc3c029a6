"""Regenerates the synthetic tuning fixtures checked in under this tree.

Each fixture is a triple: a C-like source, a loop-count profile, and a cost
model, built so that offloading helps some loops and hurts others.  Run
from the repository root:

    python tests/fixtures/generate.py
"""

from __future__ import annotations

import json
from pathlib import Path

HERE = Path(__file__).parent


def write(path: Path, text: str):
    path.write_text(text)
    print(f"wrote {path}")


def write_json(path: Path, data: dict):
    write(path, json.dumps(data, indent=2) + "\n")


def profile(records: list[tuple[int, int, int]]) -> dict:
    return {"loops": [{"id": i, "entry_count": e, "total_iterations": t}
                      for i, e, t in records]}


def model(loops: dict[int, tuple[float, float, float]],
          var_bytes: dict[str, int],
          fixed_us: float, per_kib: float) -> dict:
    return {
        "loops": {str(i): {"cpu_us_per_iter": w, "gpu_speedup": s,
                           "kernel_launch_us": l}
                  for i, (w, s, l) in loops.items()},
        "vars": {name: {"size_bytes": size} for name, size in var_bytes.items()},
        "transfer_fixed_us": fixed_us,
        "transfer_us_per_kib": per_kib,
    }


def gen_siblings3():
    src = """int main() {
    int i;
    int j;
    int k;
    float a[10000000];
    float b[10000000];
    float c[10000000];
    float d[10000000];
    float e[400000];
    float f[400000];
    b[0] = 1.0;
    d[0] = 1.0;
    f[0] = 1.0;
    for (i = 0; i < 10000000; i++) {
        a[i] = b[i] * 2.0;
    }
    for (j = 0; j < 10000000; j++) {
        c[j] = d[j] * 3.0;
    }
    for (k = 0; k < 400000; k++) {
        e[k] = f[k] + 1.0;
    }
    a[0] = c[0] + e[0];
    return 0;
}
"""
    write(HERE / "tune" / "siblings3.c", src)
    write_json(HERE / "tune" / "siblings3_profile.json",
               profile([(0, 1, 10_000_000), (1, 1, 10_000_000),
                        (2, 1, 400_000)]))
    write_json(HERE / "tune" / "siblings3_model.json", model(
        {0: (0.01, 20.0, 50.0), 1: (0.01, 0.5, 50.0), 2: (0.01, 8.0, 50.0)},
        {"a": 4_000_000, "b": 4_000_000, "c": 4_000_000, "d": 4_000_000,
         "e": 1_600_000, "f": 1_600_000},
        30.0, 0.02))


def gen_nested3():
    src = """int main() {
    int t;
    int i;
    int u;
    float m[20000][1000];
    float v[1000];
    v[0] = 1.0;
    for (t = 0; t < 20000; t++) {
        for (i = 0; i < 1000; i++) {
            m[t][i] = m[t][i] + v[i];
        }
    }
    for (u = 0; u < 1000; u++) {
        v[u] = v[u] * 1.01;
    }
    m[0][0] = m[0][0] * 2.0;
    return 0;
}
"""
    write(HERE / "tune" / "nested3.c", src)
    write_json(HERE / "tune" / "nested3_profile.json",
               profile([(0, 1, 20_000), (1, 20_000, 20_000_000), (2, 1, 1_000)]))
    write_json(HERE / "tune" / "nested3_model.json", model(
        {0: (0.001, 8.0, 25.0), 1: (0.05, 8.0, 25.0), 2: (0.05, 2.0, 25.0)},
        {"m": 80_000_000, "v": 4_000, "t": 4},
        30.0, 0.01))


def gen_synergy5():
    # selecting i or k alone pays per-iteration transfers; selecting both
    # removes each other's blockers and hoists everything to the t-loop
    src = """int main() {
    int t;
    int i;
    int k;
    int u;
    int p;
    int q;
    float a[1000];
    float b[1000];
    float g[1000000];
    float y[100000];
    float z[100000];
    float scale;
    b[0] = 1.0;
    g[0] = 1.0;
    y[0] = 1.0;
    z[0] = 1.0;
    scale = 1.5;
    for (t = 0; t < 5000; t++) {
        scale = scale * 1.001;
        for (i = 0; i < 1000; i++) {
            a[i] = b[i] * scale;
        }
        for (k = 0; k < 1000; k++) {
            b[k] = b[k] + a[k];
        }
    }
    for (u = 0; u < 1000000; u++) {
        g[u] = g[u] + 0.5;
    }
    for (p = 0; p < 100000; p++) {
        y[p] = y[p] * 2.0;
    }
    for (q = 0; q < 100000; q++) {
        z[q] = z[q] * 3.0;
    }
    return 0;
}
"""
    write(HERE / "tune" / "synergy5.c", src)
    write_json(HERE / "tune" / "synergy5_profile.json",
               profile([(0, 1, 5_000), (1, 5_000, 5_000_000),
                        (2, 5_000, 5_000_000), (3, 1, 1_000_000),
                        (4, 1, 100_000), (5, 1, 100_000)]))
    write_json(HERE / "tune" / "synergy5_model.json", model(
        {0: (0.002, 1.0, 0.0), 1: (0.1, 10.0, 20.0), 2: (0.1, 10.0, 20.0),
         3: (0.05, 10.0, 20.0), 4: (0.02, 0.5, 20.0), 5: (0.02, 0.5, 20.0)},
        {"a": 4_000, "b": 4_000, "g": 4_000_000, "y": 400_000, "z": 400_000,
         "scale": 4},
        10.0, 1.0))


def gen_deep3():
    src = """int main() {
    int t;
    int i;
    int j;
    int k;
    float acc;
    float m[500][500];
    float v[500];
    float w[500];
    v[0] = 1.0;
    w[0] = 2.0;
    m[0][0] = 0.0;
    acc = 0.0;
    for (t = 0; t < 40; t++) {
        for (i = 0; i < 500; i++) {
            for (j = 0; j < 500; j++) {
                m[i][j] = m[i][j] + v[i] * w[j];
            }
        }
        acc = acc + m[t][t];
    }
    for (k = 0; k < 500; k++) {
        v[k] = v[k] * 0.5;
    }
    return 0;
}
"""
    write(HERE / "tune" / "deep3.c", src)
    write_json(HERE / "tune" / "deep3_profile.json",
               profile([(0, 1, 40), (1, 40, 20_000), (2, 20_000, 10_000_000),
                        (3, 1, 500)]))
    write_json(HERE / "tune" / "deep3_model.json", model(
        {0: (0.1, 1.0, 0.0), 1: (0.01, 10.0, 10.0), 2: (0.05, 10.0, 10.0),
         3: (0.02, 2.0, 10.0)},
        {"m": 1_000_000, "v": 2_000, "w": 2_000, "i": 4},
        20.0, 0.1))


def gen_mix10():
    # ten sibling loops: 0-2 clearly gain, 3-6 gain a little, 7-9 lose
    lines = ["int main() {"]
    for k in range(10):
        lines.append(f"    int i{k};")
        lines.append(f"    float a{k}[1000];")
        lines.append(f"    float b{k}[1000];")
        lines.append(f"    float s{k};")
    for k in range(10):
        lines.append(f"    s{k} = {k}.5;")
        lines.append(f"    b{k}[0] = 1.0;")
    bounds = [10_000_000] + [2_000_000] * 9
    for k in range(10):
        lines.append(f"    for (i{k} = 0; i{k} < {bounds[k]}; i{k}++) {{")
        lines.append(f"        a{k}[i{k}] = a{k}[i{k}] * s{k} + b{k}[i{k}];")
        lines.append("    }")
    lines.append("    return 0;")
    lines.append("}")
    write(HERE / "tune" / "mix10.c", "\n".join(lines) + "\n")

    write_json(HERE / "tune" / "mix10_profile.json",
               profile([(k, 1, bounds[k]) for k in range(10)]))
    loops = {}
    var_bytes = {}
    for k in range(10):
        if k < 3:
            w, s = 0.05, 25.0
            size = 40_000
        elif k < 7:
            w, s = 0.01, 1.2
            size = 2_000_000
        else:
            w, s = 0.01, 0.5
            size = 8_000_000
        loops[k] = (w, s, 10.0)
        var_bytes[f"a{k}"] = size
        var_bytes[f"b{k}"] = size
        var_bytes[f"s{k}"] = 4
    write_json(HERE / "tune" / "mix10_model.json",
               model(loops, var_bytes, 25.0, 0.01))


def gen_stress75():
    """75 eligible loops interleaved with 15 non-parallelizable decoys."""
    eligible_bounds = {}
    decl_lines = []
    loop_lines = []
    records = []
    loops = {}
    var_bytes = {}
    loop_id = 0
    eligible_seen = 0
    decoys_seen = 0
    total_slots = 90

    for slot in range(total_slots):
        # every sixth slot is a decoy, until the 15 decoys are used up
        if slot % 6 == 5 and decoys_seen < 15:
            d = decoys_seen
            decoys_seen += 1
            decl_lines.append(f"    int q{d};")
            decl_lines.append(f"    float r{d}[10000];")
            loop_lines.append(f"    r{d}[0] = 0.0;")
            loop_lines.append(f"    for (q{d} = 1; q{d} < 10000; q{d}++) {{")
            loop_lines.append(f"        r{d}[q{d}] = r{d}[q{d} - 1] + 1.0;")
            loop_lines.append("    }")
            records.append((loop_id, 1, 10_000))
            loops[loop_id] = (0.01, 1.0, 0.0)
            loop_id += 1
            continue
        k = eligible_seen
        eligible_seen += 1
        helped = k % 2 == 0
        bound = 20_000_000 if helped else 2_000_000
        eligible_bounds[k] = bound
        decl_lines.append(f"    int i{k};")
        decl_lines.append(f"    float a{k}[{bound}];")
        decl_lines.append(f"    float b{k}[{bound}];")
        decl_lines.append(f"    float s{k};")
        loop_lines.append(f"    s{k} = 1.{k % 10};")
        loop_lines.append(f"    b{k}[0] = 1.0;")
        loop_lines.append(f"    for (i{k} = 0; i{k} < {bound}; i{k}++) {{")
        loop_lines.append(f"        a{k}[i{k}] = a{k}[i{k}] * s{k} + b{k}[i{k}];")
        loop_lines.append("    }")
        records.append((loop_id, 1, bound))
        if helped:
            loops[loop_id] = (0.01, 16.0, 20.0)
            size = 1_048_576
        else:
            loops[loop_id] = (0.01, 0.9, 20.0)
            size = 25_165_824
        var_bytes[f"a{k}"] = size
        var_bytes[f"b{k}"] = size
        var_bytes[f"s{k}"] = 4
        loop_id += 1

    assert eligible_seen == 75 and decoys_seen == 15

    src = "int main() {\n" + "\n".join(decl_lines) + "\n" \
        + "\n".join(loop_lines) + "\n    return 0;\n}\n"
    write(HERE / "stress" / "stress75.c", src)
    write_json(HERE / "stress" / "stress75_profile.json", profile(records))
    write_json(HERE / "stress" / "stress75_model.json",
               model(loops, var_bytes, 25.0, 0.05))


def main():
    (HERE / "tune").mkdir(exist_ok=True)
    (HERE / "stress").mkdir(exist_ok=True)
    gen_siblings3()
    gen_nested3()
    gen_synergy5()
    gen_deep3()
    gen_mix10()
    gen_stress75()


if __name__ == "__main__":
    main()
