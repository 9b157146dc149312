#!/usr/bin/env python3
"""Regenerate the syllable exception table and the CMU syllable fixture.

usage: gen_syllable_data.py CMUDICT_DICT EASY_WORDS_TXT DATA_DIR TEST_DATA_DIR

The exception table holds every familiar word whose vowel-group estimate
disagrees with the CMU Pronouncing Dictionary. The test fixture freezes CMU
counts for the familiar list plus a seeded held-out sample of other words.
"""
import random
import re
import sys

VOWELS = set("aeiouy")


def estimate(word):
    groups = len(re.findall(r"[aeiouy]+", word))
    if word.endswith("e") and not (
        word.endswith("le") and len(word) > 2 and word[-3] not in VOWELS
    ):
        groups -= 1
    return max(groups, 1)


def load_cmu(path):
    counts = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            parts = line.split("#")[0].split()
            if not parts or "(" in parts[0]:
                continue
            counts[parts[0]] = sum(1 for p in parts[1:] if p[-1].isdigit())
    return counts


def main(cmu_path, easy_path, data_dir, test_dir):
    cmu = load_cmu(cmu_path)
    with open(easy_path, encoding="utf-8") as f:
        familiar = [w.strip() for w in f if w.strip()]
    familiar_set = set(familiar)

    exceptions = sorted(w for w in familiar if w in cmu and estimate(w) != cmu[w])
    with open(f"{data_dir}/syllable_exceptions.txt", "w", encoding="utf-8") as f:
        f.write("# word syllables (CMU Pronouncing Dictionary counts)\n")
        for w in exceptions:
            f.write(f"{w} {cmu[w]}\n")

    rng = random.Random(7)
    pool = sorted(
        w for w in cmu if re.fullmatch(r"[a-z]{3,12}", w) and w not in familiar_set
    )
    held_out = sorted(rng.sample(pool, 1000))
    with open(f"{test_dir}/cmu_syllables.tsv", "w", encoding="utf-8") as f:
        f.write("# word\tsyllables\tset\n")
        for w in familiar:
            if w in cmu:
                f.write(f"{w}\t{cmu[w]}\tfamiliar\n")
        for w in held_out:
            f.write(f"{w}\t{cmu[w]}\theldout\n")
    print(f"{len(exceptions)} exceptions, {len(held_out)} held-out words")


if __name__ == "__main__":
    main(*sys.argv[1:5])
