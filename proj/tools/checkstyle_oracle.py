"""Run the real Checkstyle on the committed corpus and record flagged lines.

Pinned oracle: Checkstyle 8.24 (checkstyle-8.24-all.jar from the npm package
java-checkstyle@0.1.0) under its bundled google_checks.xml with Checker
tabWidth=4, executed on the JRE shipped in the PyPI wheel jdk4py.

    python3 tools/checkstyle_oracle.py [--jar PATH] [--java PATH]

Writes tests/data/checkstyle_oracle.json: per file, per criterion, the sorted
list of flagged lines.
"""
import argparse
import json
import pathlib
import subprocess
import sys
import tarfile
import tempfile
import xml.etree.ElementTree as ET
import zipfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "tests" / "data" / "checkstyle_corpus"
OUT = ROOT / "tests" / "data" / "checkstyle_oracle.json"
NPM_PACKAGE = "java-checkstyle@0.1.0"
JAR_IN_PACKAGE = "package/lib/checkstyle-8.24-all.jar"

CRITERIA = [
    "NoLineWrap", "AvoidStarImport", "OneTopLevelClass", "EmptyLineSeparator", "RightCurly", "SeparatorWrap",
    "WhitespaceAround", "GenericWhitespace", "OperatorWrap", "LineLength", "LeftCurly", "EmptyBlock", "NeedBraces",
    "MultipleVariableDeclarations", "OneStatementPerLine", "UpperEll", "ModifierOrder", "FallThrough",
    "MissingSwitchDefault", "TypeName", "MethodName", "MemberName", "ParameterName", "LocalVariableName",
    "Indentation",
]


def fetch_jar(workdir):
    subprocess.run(["npm", "pack", NPM_PACKAGE], cwd=workdir, check=True, stdout=subprocess.DEVNULL)
    tgz = next(pathlib.Path(workdir).glob("java-checkstyle-*.tgz"))
    with tarfile.open(tgz) as t:
        t.extract(JAR_IN_PACKAGE, workdir)
    return pathlib.Path(workdir) / JAR_IN_PACKAGE


def find_java():
    try:
        import jdk4py
    except ImportError:
        subprocess.run([sys.executable, "-m", "pip", "install", "jdk4py"], check=True)
        import jdk4py
    return str(jdk4py.JAVA)


def write_config(jar, workdir):
    with zipfile.ZipFile(jar) as z:
        xml = z.read("google_checks.xml").decode("utf-8")
    marker = '<module name = "Checker">'
    assert marker in xml
    xml = xml.replace(marker, marker + '\n    <property name="tabWidth" value="4"/>', 1)
    path = pathlib.Path(workdir) / "google_checks_tab4.xml"
    path.write_text(xml)
    return path


def module_of(source):
    name = source.rsplit(".", 1)[-1]
    if name.endswith("Check"):
        return name[: -len("Check")]
    # Modules configured with an id report the id instead of the class.
    for module in ("RightCurly", "SeparatorWrap", "AnnotationLocation"):
        if name.startswith(module):
            return module
    return name


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jar")
    ap.add_argument("--java")
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as work:
        jar = pathlib.Path(args.jar) if args.jar else fetch_jar(work)
        java = args.java or find_java()
        config = write_config(jar, work)
        files = sorted(CORPUS.glob("*.java"))
        proc = subprocess.run(
            [java, "-jar", str(jar), "-c", str(config), "-f", "xml"] + [str(f) for f in files],
            capture_output=True, text=True)
        root = ET.fromstring(proc.stdout[proc.stdout.index("<?xml"):])
    result = {}
    errors = {}
    for f in root.iter("file"):
        name = pathlib.Path(f.get("name")).name
        per = {c: set() for c in CRITERIA}
        for e in f.iter("error"):
            mod = module_of(e.get("source"))
            if mod in per:
                per[mod].add(int(e.get("line")))
            elif "Exception" in (e.get("source") or "") or e.get("severity") == "error":
                errors[name] = e.get("message")
        result[name] = {c: sorted(v) for c, v in per.items()}
    out = {
        "tool": "checkstyle 8.24",
        "config": "google_checks.xml + tabWidth=4",
        "unparsed": errors,
        "files": dict(sorted(result.items())),
    }
    OUT.write_text(json.dumps(out, indent=1, sort_keys=False) + "\n")
    print("wrote %s (%d files, %d parse errors)" % (OUT, len(result), len(errors)))


if __name__ == "__main__":
    main()
