#!/usr/bin/env python3
"""Writes a parse cache for `mtgender analyze --parse-cache`.

    python3 spacy_parse.py corpus.jsonl parses.jsonl [--model en_core_web_trf]

Offsets are code point indices into the source sentence.
"""

import argparse
import json


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("corpus")
    ap.add_argument("out")
    ap.add_argument("--model", default="en_core_web_sm")
    args = ap.parse_args()

    import spacy

    nlp = spacy.load(args.model)
    with open(args.corpus, encoding="utf-8") as src, open(args.out, "w", encoding="utf-8") as dst:
        for line in src:
            if not line.strip():
                continue
            row = json.loads(line)
            doc = nlp(row["source"])
            words = []
            for t in doc:
                words.append({
                    "text": t.text,
                    "start": t.idx,
                    "end": t.idx + len(t.text),
                    "pos": t.pos_,
                    "head": -1 if t.head.i == t.i else t.head.i,
                })
            dst.write(json.dumps({"sentence_id": row["id"], "words": words}, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
