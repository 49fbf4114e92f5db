#!/usr/bin/env python3
"""Walkthrough: zero-shot label assignment and caption assembly."""

from stylesearch import Embedding, build_prompt, classify, cosine, finalize_caption

print("== cosine similarity ==")
image = Embedding((1.0, 0.0))
print("cos([1,0],[0.6,0.8]) =", cosine(image, Embedding((0.6, 0.8))))

print("\n== pick the best subcategory label ==")
candidates = [
    ("jeans", Embedding((0.6, 0.8))),
    ("chinos", Embedding((0.0, 1.0))),
    ("joggers", Embedding((-0.7, 0.7))),
]
result = classify(image, candidates)
for label, score in result.ranked:
    marker = " <- winner" if label == result.label else ""
    print(f"  {label:8s} {score:+.4f}{marker}")

print("\n== prompt-steered caption ==")
prompt = build_prompt(result.label)
print("prompt:", repr(prompt))
generated = "This Jeans Features  a slim tapered leg in faded   indigo denim"
caption = finalize_caption(result.label, prompt, generated)
print("raw generated:", repr(generated))
print("normalized body:", repr(caption.body))
print("full text:", repr(caption.full_text))

again = finalize_caption(result.label, caption.prompt, caption.full_text)
print("idempotent:", again == caption)
