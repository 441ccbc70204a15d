"""Reference BLEU-4 and Rouge-1/2 for the committed eval pairs.

BLEU is nltk's sentence_bleu with uniform weights over orders 1..N,
N = min(4, len(candidate)), no smoothing.  Rouge is rouge_score's
RougeScorer F-measure with a Java code tokenizer plugged in.  Writes
tests/data/eval_golden.json.

    pip install nltk rouge-score
    python3 tools/text_metric_oracle.py
"""
import json
import pathlib
import re
import warnings

from nltk.translate.bleu_score import sentence_bleu
from rouge_score import rouge_scorer

DATA = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
PAIRS = DATA / "eval_pairs"

TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<char>'(?:\\.|[^'\\\n])*')
  | (?P<number>
        0[xX][0-9a-fA-F_]+[lL]?
      | 0[bB][01_]+[lL]?
      | (?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlL]?
    )
  | (?P<word>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<op>>>>=|<<=|>>=|>>>|\.\.\.|->|::|\+\+|--|&&|\|\||[=!<>+\-*/&|^%]=|<<|>>|[-+*/%=<>!~?:&|^@.,;(){}\[\]])
    """,
    re.S | re.X,
)


def java_tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if m is None:
            raise ValueError("cannot tokenize at %d: %r" % (pos, text[pos:pos + 20]))
        if m.lastgroup not in ("ws", "comment"):
            out.append(m.group())
        pos = m.end()
    return out


class JavaTokenizer:
    def tokenize(self, text):
        return java_tokens(text)


def bleu4(cand, ref):
    if not cand or not ref:
        return 0.0
    n = min(4, len(cand))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return float(sentence_bleu([ref], cand, weights=tuple([1.0 / n] * n)))


def main():
    scorer = rouge_scorer.RougeScorer(["rouge1", "rouge2"], tokenizer=JavaTokenizer())
    rows = []
    for line in (PAIRS / "manifest.jsonl").read_text().splitlines():
        entry = json.loads(line)
        gen = (PAIRS / entry["generated_path"]).read_text()
        ref = (PAIRS / entry["reference_path"]).read_text()
        scores = scorer.score(ref, gen)
        rows.append({
            "problem_id": entry["problem_id"],
            "user_id": entry["user_id"],
            "bleu4": bleu4(java_tokens(gen), java_tokens(ref)),
            "rouge1": scores["rouge1"].fmeasure,
            "rouge2": scores["rouge2"].fmeasure,
        })
    out = {"scorers": {"bleu": "nltk sentence_bleu", "rouge": "rouge_score RougeScorer"}, "pairs": rows}
    (DATA / "eval_golden.json").write_text(json.dumps(out, indent=1) + "\n")
    print("wrote %s (%d pairs)" % (DATA / "eval_golden.json", len(rows)))


if __name__ == "__main__":
    main()
