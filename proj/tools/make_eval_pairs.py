"""Write the committed generated/reference pairs under tests/data/eval_pairs.

References are the hand-written corpus files c01..c20.  Each generated side
is the reference with a seeded set of edits: identifier renames, dropped or
swapped lines, changed literals and spacing changes.  Pair 01 is left
identical.
"""
import json
import pathlib
import random
import re

ROOT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
CORPUS = ROOT / "checkstyle_corpus"
OUT = ROOT / "eval_pairs"


def rename(lines, rng):
    text = "\n".join(lines)
    names = sorted(set(re.findall(r"\b[a-z][A-Za-z0-9]*\b", text)) - KEYWORDS)
    if not names:
        return lines
    old = rng.choice(names)
    new = old + rng.choice(["X", "2", "Tmp", "Val"])
    return [re.sub(r"\b%s\b" % re.escape(old), new, l) for l in lines]


def drop_line(lines, rng):
    body = [i for i, l in enumerate(lines) if l.strip().endswith(";") and not l.lstrip().startswith("import")]
    if not body:
        return lines
    i = rng.choice(body)
    return lines[:i] + lines[i + 1:]


def swap_lines(lines, rng):
    cand = [i for i in range(len(lines) - 1)
            if lines[i].strip().endswith(";") and lines[i + 1].strip().endswith(";")]
    if not cand:
        return lines
    i = rng.choice(cand)
    out = list(lines)
    out[i], out[i + 1] = out[i + 1], out[i]
    return out


def change_literal(lines, rng):
    idx = [i for i, l in enumerate(lines) if re.search(r"\b\d+\b", l)]
    if not idx:
        return lines
    i = rng.choice(idx)
    out = list(lines)
    out[i] = re.sub(r"\b(\d+)\b", lambda m: str(int(m.group(1)) + rng.randint(1, 9)), out[i], count=1)
    return out


def respace(lines, rng):
    out = []
    for l in lines:
        if rng.random() < 0.3:
            l = re.sub(r"\s*([=+<>])\s*", r" \1 ", l) if rng.random() < 0.5 else re.sub(r" ([=+<>]) ", r"\1", l)
        out.append(l)
    return out


KEYWORDS = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null", "java", "util",
    "io", "main", "args",
}

EDITS = [rename, drop_line, swap_lines, change_literal, respace]


def main():
    rng = random.Random(7)
    OUT.mkdir(parents=True, exist_ok=True)
    manifest = []
    for k in range(1, 21):
        ref = (CORPUS / ("c%02d.java" % k)).read_text()
        lines = ref.split("\n")
        if k > 1:
            for _ in range(rng.randint(1, 4)):
                lines = rng.choice(EDITS)(lines, rng)
        gen = "\n".join(lines)
        (OUT / ("p%02d_ref.java" % k)).write_text(ref)
        (OUT / ("p%02d_gen.java" % k)).write_text(gen)
        manifest.append({
            "generated_path": "p%02d_gen.java" % k,
            "reference_path": "p%02d_ref.java" % k,
            "user_id": "u%d" % (k % 4),
            "problem_id": "p%02d" % k,
        })
    with open(OUT / "manifest.jsonl", "w") as f:
        for row in manifest:
            f.write(json.dumps(row) + "\n")


if __name__ == "__main__":
    main()
