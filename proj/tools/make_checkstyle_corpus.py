"""Derive mutated copies of the hand-written Java bases.

c01..c25 are written by hand; c26..c50 are c01..c25 with a seeded random
selection of formatting mutations applied.  c51 onward are small hand-written
probes and are left alone.  Re-running reproduces the committed files byte
for byte.
"""
import pathlib
import random
import re
import sys

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "checkstyle_corpus"


def lines_of(text):
    return text.split("\n")


def reindent(text, rng):
    unit = rng.choice(["    ", "\t", "   ", "  "])
    out = []
    for line in lines_of(text):
        stripped = line.lstrip(" \t")
        lead = line[: len(line) - len(stripped)]
        width = lead.count("\t") * 4 + lead.count(" ")
        base = 2 if "  " in text and "    " not in text else 4
        if "\t" in text:
            base = 4
        out.append(unit * (width // base) + " " * (width % base) + stripped)
    return "\n".join(out)


def allman(text, rng):
    out = []
    for line in lines_of(text):
        m = re.match(r"^(\s*)(.*\S)\s*\{$", line)
        if m and not m.group(2).startswith("}") and rng.random() < 0.7:
            out.append(m.group(1) + m.group(2))
            out.append(m.group(1) + "{")
        else:
            out.append(line)
    return "\n".join(out)


def split_else(text, rng):
    return re.sub(r"^(\s*)\} (else|catch|finally)", r"\1}\n\1\2", text, flags=re.M)


def squeeze_operators(text, rng):
    out = []
    for line in lines_of(text):
        if rng.random() < 0.5 and not line.strip().startswith(("//", "*", "import")):
            line = re.sub(r"(\w) (=|\+|<|>|-|\*|/|==|!=|<=|>=|&&|\|\|) (\w)", r"\1\2\3", line)
        out.append(line)
    return "\n".join(out)


def star_imports(text, rng):
    seen = set()
    out = []
    for line in lines_of(text):
        m = re.match(r"^import (java\.[a-z.]+)\.[A-Z]\w*;$", line)
        if m:
            if m.group(1) in seen:
                continue
            seen.add(m.group(1))
            out.append("import %s.*;" % m.group(1))
        else:
            out.append(line)
    return "\n".join(out)


def wrap_import(text, rng):
    return re.sub(r"^import (java\.\w+)\.(\w+);$", r"import \1\n    .\2;", text, count=1, flags=re.M)


def body_insert_point(lines):
    for i, line in enumerate(lines):
        if "void main(" in line:
            j = i if line.rstrip().endswith("{") else i + 1
            indent = re.match(r"^\s*", lines[j + 1]).group(0)
            return j + 1, indent
    return None, None


def lower_ell(text, rng):
    lines = lines_of(text)
    at, indent = body_insert_point(lines)
    if at is None:
        return text
    lines.insert(at, indent + "long limit = %dl;" % rng.randint(10, 99999))
    return "\n".join(lines)


def modifier_swap(text, rng):
    text = text.replace("public static void main", "static public void main", 1)
    return re.sub(r"\bprivate static final\b", "private final static", text)


def join_statements(text, rng):
    lines = lines_of(text)
    out = []
    i = 0
    while i < len(lines):
        a = lines[i]
        if (
            i + 1 < len(lines)
            and rng.random() < 0.35
            and re.match(r"^\s*[\w.\[\]<>]+ ?[\w.\[\]]* ?=.*;$", a)
            and re.match(r"^\s*\w[^{}]*;$", lines[i + 1])
            and not a.strip().startswith(("for", "if", "return"))
        ):
            out.append(a + " " + lines[i + 1].strip())
            i += 2
            continue
        out.append(a)
        i += 1
    return "\n".join(out)


def long_comment(text, rng):
    lines = lines_of(text)
    candidates = [i for i, l in enumerate(lines) if l.rstrip().endswith(";") and "import" not in l]
    if not candidates:
        return text
    i = rng.choice(candidates)
    lines[i] += " // " + "this line carries an explanation that keeps going well past the column limit"
    return "\n".join(lines)


def drop_blank_lines(text, rng):
    return re.sub(r"\}\n\n(\s+)(public|private|static|@Override|[A-Za-z<]\w* \w+\()", r"}\n\1\2", text)


def wrap_dot(text, rng):
    return re.sub(r"System\.out\.println\(", "System.out.\n            println(", text, count=1)


def wrap_plus(text, rng):
    return re.sub(r'(println\([^;\n]*?) \+ ', r"\1 +\n            ", text, count=1)


def generic_spaces(text, rng):
    return re.sub(r"\b(List|Map|Deque|Queue|Node)<(\w+)>", r"\1< \2 >", text, count=2)


def keyword_spaces(text, rng):
    return re.sub(r"\b(if|for|while|switch|catch) \(", r"\1(", text)


def brace_spaces(text, rng):
    return re.sub(r"\) \{", "){", text)


def snake_names(text, rng):
    names = sorted(set(re.findall(r"\b(?:int|long|String|double|boolean) ([a-z][a-z]+)\b", text)))
    rng.shuffle(names)
    for name in names[:2]:
        if name in ("args", "main", "length"):
            continue
        new = name + "_" + rng.choice(["val", "count", "tmp"])
        text = re.sub(r"\b%s\b" % name, new, text)
    return text


def upper_method(text, rng):
    m = re.search(r"static \w+ ([a-z]\w*)\(", text)
    if not m or m.group(1) == "main":
        return text
    name = m.group(1)
    return re.sub(r"\b%s\(" % name, name[0].upper() + name[1:] + "(", text)


MUTATIONS = [
    reindent, allman, split_else, squeeze_operators, star_imports, wrap_import, lower_ell, modifier_swap,
    join_statements, long_comment, drop_blank_lines, wrap_dot, wrap_plus, generic_spaces, keyword_spaces,
    brace_spaces, snake_names, upper_method,
]


def mutate(text, rng):
    chosen = [m for m in MUTATIONS if rng.random() < 0.3]
    if not chosen:
        chosen = [rng.choice(MUTATIONS)]
    for m in chosen:
        text = m(text, rng)
    return text, [m.__name__ for m in chosen]


def main():
    rng = random.Random(2024)
    for k in range(1, 26):
        base = (CORPUS / ("c%02d.java" % k)).read_text()
        text, names = mutate(base, rng)
        (CORPUS / ("c%02d.java" % (k + 25))).write_text(text)
        print("c%02d <- c%02d: %s" % (k + 25, k, ", ".join(names)), file=sys.stderr)


if __name__ == "__main__":
    main()
