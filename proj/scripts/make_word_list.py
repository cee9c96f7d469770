#!/usr/bin/env python3
"""Regenerate data/persian_words.tsv from the wordfreq Persian word list.

Keeps words spelled only with the 32 base Persian letters. Counts are
occurrences per billion words, rounded.
"""
import argparse

import wordfreq

LETTERS = set("ابپتثجچحخدذرزژسشصضطظعغفقکگلمنوهی")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--scan", type=int, default=3000, help="how many top words to scan")
    parser.add_argument("--keep", type=int, default=1000, help="how many words to write")
    parser.add_argument("out")
    args = parser.parse_args()

    rows = []
    for word in wordfreq.top_n_list("fa", args.scan):
        if word and set(word) <= LETTERS:
            count = round(wordfreq.word_frequency(word, "fa") * 1e9)
            if count > 0:
                rows.append((word, count))
        if len(rows) == args.keep:
            break

    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        for word, count in rows:
            f.write(f"{word}\t{count}\n")


if __name__ == "__main__":
    main()
