#!/usr/bin/env python3
#
# ligvec - Copyright 2026 The ligvec Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Writes the planted three-family toy dataset to data/toy/."""

import pathlib
import random

FAMILIES = {
    "a.1.1.1": {
        "fragments": ["c1ccccc1", "C(=O)O", "OCCO", "c1ccc(O)cc1", "C(=O)OC"],
        "motif": "MKVLAT",
        "bits": [0, 1, 2, 3, 4],
    },
    "a.1.1.2": {
        "fragments": ["N1CCNCC1", "C(=O)N", "NCCN", "c1ccncc1", "CN(C)C"],
        "motif": "GQWERY",
        "bits": [5, 6, 7, 8, 9],
    },
    "b.2.1.1": {
        "fragments": ["S(=O)(=O)", "FC(F)F", "ClCCl", "c1ccsc1", "BrCBr"],
        "motif": "PHDSIN",
        "bits": [10, 11, 12, 13, 14],
    },
}
PROTEINS_PER_FAMILY = 10
LIGANDS_PER_FAMILY = 30
CORPUS_PER_FAMILY = 300
FP_WIDTH = 16
AMINO = "ACDEFGHIKLMNPQRSTVWY"


def ligand(rng, fragments):
    return "".join(rng.choice(fragments) for _ in range(rng.randint(3, 5)))


def main():
    rng = random.Random(20261016)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"
    out.mkdir(parents=True, exist_ok=True)

    interactions, gold, corpus, sequences, fingerprints = [], [], [], [], []
    for f_index, (family, spec) in enumerate(FAMILIES.items()):
        pool = []
        for i in range(LIGANDS_PER_FAMILY):
            lid = f"L{f_index}{i:03d}"
            smiles = ligand(rng, spec["fragments"])
            pool.append((lid, smiles))
            bits = [1 if b in spec["bits"] and rng.random() < 0.8 else 0 for b in range(FP_WIDTH)]
            bits[15] = 1 if rng.random() < 0.5 else 0
            fingerprints.append(f"{lid}\t{''.join(map(str, bits))}")
        for i in range(PROTEINS_PER_FAMILY):
            pid = f"d{f_index}p{i:02d}_"
            gold.append(f"{pid}\t{family}")
            for lid, smiles in rng.sample(pool, rng.randint(4, 8)):
                interactions.append(f"{pid}\t{lid}\t{smiles}")
            body = "".join(rng.choice(AMINO) for _ in range(40))
            sequences.append(f">{pid}\n{spec['motif'] * 4}{body}{spec['motif'] * 2}")
        corpus.extend(smiles for _, smiles in pool)
        corpus.extend(ligand(rng, spec["fragments"]) for _ in range(CORPUS_PER_FAMILY))

    rng.shuffle(corpus)
    (out / "interactions.tsv").write_text("\n".join(interactions) + "\n")
    (out / "gold.tsv").write_text("\n".join(gold) + "\n")
    (out / "corpus.smi").write_text("\n".join(corpus) + "\n")
    (out / "sequences.fasta").write_text("\n".join(sequences) + "\n")
    (out / "fingerprints.tsv").write_text("\n".join(fingerprints) + "\n")


if __name__ == "__main__":
    main()
