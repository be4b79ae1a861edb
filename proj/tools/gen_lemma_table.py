#!/usr/bin/env python3
"""Generate data/lemma_table_en.tsv from lemminflect's dictionary.

The vocabulary is the most frequent English words according to wordfreq.
For each word the dictionary noun and verb lemmas are written as
surface/lemma/pos rows. Rows that would make lemmatization non-idempotent
under the runtime lookup (explicit map first, then suffix rules whose
candidate is a known lemma) are dropped.

usage: gen_lemma_table.py [--words 40000] [--out data/lemma_table_en.tsv]
"""

import argparse
import re

from lemminflect import getAllLemmas
from wordfreq import top_n_list, word_frequency

NOUN_RULES = [("ies", "y"), ("ves", "f"), ("ves", "fe"), ("ses", "s"), ("xes", "x"), ("ches", "ch"),
              ("shes", "sh"), ("zes", "z"), ("oes", "o"), ("s", "")]
VERB_RULES = [(c * 2 + suf, c) for c in "bdglmnprt" for suf in ("ed", "ing")] + [
    ("ies", "y"), ("ied", "y"), ("es", ""), ("s", ""), ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", "")]

WORD = re.compile(r"^[a-z]+('[a-z]+)?$")


def build_map(rows):
    m = {}
    for surface, lemma in rows:
        m[surface] = lemma
        m.setdefault(lemma, lemma)
    return m


def lookup(m, rules, token):
    if token in m:
        return m[token]
    for pat, rep in rules:
        if len(token) > len(pat) and token.endswith(pat):
            cand = token[: len(token) - len(pat)] + rep
            if m.get(cand) == cand:
                return cand
    return token


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--words", type=int, default=40000)
    ap.add_argument("--out", default="data/lemma_table_en.tsv")
    args = ap.parse_args()

    vocab = [w for w in top_n_list("en", args.words) if WORD.match(w)]
    rows = {"N": {}, "V": {}}
    for w in vocab:
        for pos, upos in (("N", "NOUN"), ("V", "VERB")):
            lemmas = getAllLemmas(w, upos=upos).get(upos)
            candidates = [x.lower() for x in lemmas or () if WORD.match(x.lower())]
            if candidates:
                # an inflected reading beats the identity reading; then frequency
                rows[pos][w] = max(candidates, key=lambda x: (x != w, word_frequency(x, "en"), x))

    # Pin lemmas as fixed points where a suffix rule would move them again;
    # drop rows only if that does not settle it.
    for _ in range(20):
        nmap = build_map(rows["N"].items())
        vmap = build_map(rows["V"].items())
        pins, bad = [], set()
        for w in set(vocab) | set(nmap) | set(vmap):
            once_p = lookup(nmap, NOUN_RULES, w)
            if lookup(nmap, NOUN_RULES, once_p) != once_p:
                pins.append(("N", once_p))
                bad.add(("N", w))
            once_f = lookup(vmap, VERB_RULES, once_p)
            again = lookup(nmap, NOUN_RULES, once_f)
            if again != once_f:
                pins.append(("N", once_f))
                bad.add(("V", w))
            elif lookup(vmap, VERB_RULES, again) != once_f:
                pins.append(("V", once_f))
                bad.add(("V", w))
        if not bad:
            break
        fresh = [(pos, w) for pos, w in pins if rows[pos].get(w) != w]
        for pos, w in fresh:
            rows[pos][w] = w
        if not fresh:
            for pos, w in bad:
                rows[pos].pop(w, None)
    else:
        raise SystemExit("lemma table did not converge to an idempotent state")

    with open(args.out, "w", encoding="utf-8") as f:
        f.write("# surface\tlemma\tpos\n")
        f.write(f"# generated by tools/gen_lemma_table.py from lemminflect over the {args.words} most frequent "
                "English words (wordfreq)\n")
        for pos in ("N", "V"):
            for surface in sorted(rows[pos]):
                f.write(f"{surface}\t{rows[pos][surface]}\t{pos}\n")
    print(f"wrote {sum(len(r) for r in rows.values())} rows to {args.out}")


if __name__ == "__main__":
    main()
