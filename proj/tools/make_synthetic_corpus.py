"""Seeded synthetic user corpus for the residual-dataset tests.

Every record is one small program built from a clean Google-style base with
a random subset of toggles switched on; each toggle introduces one style
attribute.  The toggle names are kept in an extra "toggles" key, which the
corpus loader ignores.

    python3 tools/make_synthetic_corpus.py [--records 200] [--seed 11] [-o PATH]
"""
import argparse
import json
import pathlib
import random

DEFAULT_OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "synthetic_corpus.jsonl"

TOGGLES = [
    "AvoidStarImport", "UpperEll", "LocalVariableName", "MissingSwitchDefault", "NeedBraces", "LeftCurly",
    "WhitespaceAround", "MultipleVariableDeclarations", "Indentation", "OneStatementPerLine", "ModifierOrder",
    "MethodName", "EmptyBlock", "ParameterName", "TypeName", "MemberName",
]


def program(on):
    ind = "    " if "Indentation" in on else "  "
    count = "Count" if "LocalVariableName" in on else "count"
    args = "Args" if "ParameterName" in on else "args"
    cls = "Main_1" if "TypeName" in on else "Main"
    helper = "Twice" if "MethodName" in on else "twice"
    field = "Limit" if "MemberName" in on else "limit"
    ell = "0l" if "UpperEll" in on else "0L"
    mods = "static public" if "ModifierOrder" in on else "public static"
    plus = "total+=" if "WhitespaceAround" in on else "total +="

    def i(n):
        return ind * n

    out = ["import java.util.*;" if "AvoidStarImport" in on else "import java.util.Scanner;", ""]
    out.append("public class %s {" % cls)
    out.append(i(1) + "private int %s = 3;" % field)
    out.append("")
    out.append(i(1) + "static int %s(int v) {" % helper)
    out.append(i(2) + "return v * 2;")
    out.append(i(1) + "}")
    out.append("")
    if "LeftCurly" in on:
        out.append(i(1) + "%s void main(String[] %s)" % (mods, args))
        out.append(i(1) + "{")
    else:
        out.append(i(1) + "%s void main(String[] %s) {" % (mods, args))
    out.append(i(2) + "Scanner in = new Scanner(System.in);")
    out.append(i(2) + "int %s = in.nextInt();" % count)
    out.append(i(2) + "long total = %s;" % ell)
    if "MultipleVariableDeclarations" in on:
        out.append(i(2) + "int lo = 0, hi = 0;")
    if "OneStatementPerLine" in on:
        out.append(i(2) + "total = 1; total = 0;")
    if "NeedBraces" in on:
        out.append(i(2) + "for (int k = 0; k < %s; k++)" % count)
        out.append(i(3) + "%s in.nextInt();" % plus)
    else:
        out.append(i(2) + "for (int k = 0; k < %s; k++) {" % count)
        out.append(i(3) + "%s in.nextInt();" % plus)
        out.append(i(2) + "}")
    if "EmptyBlock" in on:
        out.append(i(2) + "if (%s < 0) {" % count)
        out.append(i(2) + "}")
    out.append(i(2) + "switch (%s) {" % count)
    out.append(i(3) + "case 0:")
    out.append(i(4) + 'System.out.println("none");')
    out.append(i(4) + "break;")
    if "MissingSwitchDefault" in on:
        out.append(i(3) + "case 1:")
    else:
        out.append(i(3) + "default:")
    out.append(i(4) + "System.out.println(%s((int) total));" % helper)
    out.append(i(4) + "break;")
    out.append(i(2) + "}")
    out.append(i(1) + "}")
    out.append("}")
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--records", type=int, default=200)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("-o", "--out", default=str(DEFAULT_OUT))
    a = ap.parse_args()
    rng = random.Random(a.seed)
    users = max(1, a.records // 10)
    problems = max(1, (a.records + users - 1) // users)
    rows = []
    for n in range(a.records):
        user, problem = n % users, n // users
        on = sorted(t for t in TOGGLES if rng.random() < 0.12)
        rows.append({
            "user_id": "u%03d" % user,
            "problem_id": "p%03d" % problem,
            "question": "Read n integers and print twice their sum (problem %d)." % problem,
            "code": program(set(on)),
            "toggles": on,
        })
    with open(a.out, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")
    print("wrote %s (%d records, %d users, %d problems)" % (a.out, len(rows), users, problems))


if __name__ == "__main__":
    main()
