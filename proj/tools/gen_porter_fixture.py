"""Write tests/data/porter_nltk.tsv: word -> stem under NLTK's
ORIGINAL_ALGORITHM mode, used as an external oracle for porter_stem.

usage: python3 tools/gen_porter_fixture.py
"""
import pathlib
import re

from nltk.stem.porter import PorterStemmer

root = pathlib.Path(__file__).resolve().parent.parent
words = set()
for line in (root / "data" / "dale_chall_words.txt").read_text().split():
    words.add(line)
for line in (root / "tests" / "data" / "cmu_syllables.tsv").read_text().splitlines():
    words.add(line.split("\t")[0])
words |= {
    "caresses", "ponies", "ties", "caress", "cats", "feed", "agreed", "plastered", "bled",
    "motoring", "sing", "conflated", "troubled", "sized", "hopping", "tanned", "falling",
    "hissing", "fizzed", "failing", "filing", "happy", "sky", "relational", "conditional",
    "rational", "valenci", "hesitanci", "digitizer", "conformabli", "radicalli", "differentli",
    "vileli", "analogousli", "vietnamization", "predication", "operator", "feudalism",
    "decisiveness", "hopefulness", "callousness", "formaliti", "sensitiviti", "sensibiliti",
    "triplicate", "formative", "formalize", "electriciti", "electrical", "hopeful", "goodness",
    "revival", "allowance", "inference", "airliner", "gyroscopic", "adjustable", "defensible",
    "irritant", "replacement", "adjustment", "dependent", "adoption", "homologou", "communism",
    "activate", "angulariti", "homologous", "effective", "bowdlerize", "probate", "rate",
    "cease", "controll", "roll", "generalizations", "oscillators",
}
words = sorted(w for w in words if re.fullmatch(r"[a-z]+", w))
stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
with open(root / "tests" / "data" / "porter_nltk.tsv", "w") as out:
    for w in words:
        out.write(f"{w}\t{stemmer.stem(w, to_lowercase=False)}\n")
print(len(words), "words")
