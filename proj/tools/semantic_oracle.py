#!/usr/bin/env python3
"""Brute-force expected values for the semantic score fixtures.

Embeds every token as hashed character trigrams of "#token#" (32-bit FNV-1a,
64 buckets, unit length), takes the cosine of every reference/generated token
pair, and averages the row and column maxima.  Written independently of the
C++ implementation; tests/unit/metrics_test.cpp compares against the output.
"""
import json
import math
import re
import sys
from pathlib import Path

DIM = 64

PAIRS = [
    ("patient has diabetes", "patient has chronic diabetes"),
    ("patient has diabetes", "patient has diabetes"),
    ("type 2 diabetes managed with metformin", "diabetes type two treated with metformin daily"),
    ("hypertension controlled on lisinopril", "blood pressure well controlled with lisinopril"),
    ("no known drug allergies", "patient reports no drug allergies"),
    ("penicillin allergy with severe rash", "severe penicillin reaction rash"),
    ("asthma since childhood uses salbutamol inhaler", "childhood asthma salbutamol as needed"),
    ("appendectomy in 2010 without complications", "uncomplicated appendix removal 2010"),
    ("former smoker quit five years ago", "ex smoker stopped smoking five years back"),
    ("persistent cough and fatigue for two weeks", "two week history of cough fatigue"),
    ("temperature 37.9 heart rate 88", "fever 37.9 with pulse 88"),
    ("chest xray shows right lower lobe opacity", "xray right lower lobe consolidation"),
    ("influenza vaccine given october", "flu vaccination october"),
    ("follow up in two weeks", "review after fourteen days"),
    ("chronic kidney disease stage 3", "ckd stage three chronic"),
    ("atrial fibrillation on warfarin", "af anticoagulated with warfarin"),
    ("migraine with aura", "headache migraine aura visual"),
    ("knee osteoarthritis", "osteoarthritis of the left knee with pain"),
    ("bronchitis treated with amoxicillin 500 mg", "amoxicillin 500mg for acute bronchitis"),
    ("spo2 98 on room air", "oxygen saturation 98 percent room air"),
]


def fnv1a32(data):
    h = 0x811C9DC5
    for b in data:
        h ^= b
        h = (h * 0x01000193) & 0xFFFFFFFF
    return h


def embed(token):
    padded = ("#" + token + "#").encode("utf-8")
    v = [0.0] * DIM
    for i in range(len(padded) - 2):
        v[fnv1a32(padded[i:i + 3]) % DIM] += 1.0
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def cos(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


def tokens(text):
    return [t for t in re.split(r"[^0-9a-z]+", text.lower()) if t]


def score(ref, gen):
    sim = [[min(1.0, max(0.0, cos(embed(r), embed(g)))) for g in gen] for r in ref]
    recall = sum(max(row) for row in sim) / len(ref)
    precision = sum(max(sim[i][j] for i in range(len(ref))) for j in range(len(gen))) / len(gen)
    f1 = 0.0 if recall + precision == 0 else 2 * precision * recall / (precision + recall)
    return recall, precision, f1


def main(out):
    rows = []
    for ref_text, gen_text in PAIRS:
        ref, gen = tokens(ref_text), tokens(gen_text)
        r, p, f = score(ref, gen)
        rows.append({"reference": ref_text, "generated": gen_text,
                     "reference_tokens": ref, "generated_tokens": gen,
                     "recall": r, "precision": p, "f1": f})
    out.write_text(json.dumps(rows, indent=2) + "\n")


if __name__ == "__main__":
    default = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "semantic_oracle.json"
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else default)
