#!/usr/bin/env python3
"""Regenerates the synthetic episode fixtures in this directory.

Output is deterministic: rerunning produces byte-identical files.

    python3 fixtures/generate.py
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
SUBSETS = ["General", "Install", "GoogleApps", "Single", "WebShopping"]
SENTINEL = [-1.0, -1.0]
GOALS = [
    "what's the news in chile?",
    "set an alarm for 7am",
    "search for cheap headphones",
    "turn on wifi",
    "open the calendar",
    "show me the weather in paris",
]
WORDS = ["news", "chile", "weather", "cheap", "headphones", "alarm", "Paris", "7am"]


def coord(rng):
    # Raw, unrounded coordinates; the toolkit normalizes on load.
    return round(rng.uniform(0.02, 0.98), 8)


def click(rng):
    p = [coord(rng), coord(rng)]
    if rng.random() < 0.25:
        q = [min(1.0, max(0.0, round(v + rng.uniform(-0.01, 0.01), 8))) for v in p]
        return p, q
    return p, list(p)


def scroll(rng):
    travel = rng.uniform(0.25, 0.6)
    start = rng.uniform(0.05, 0.95 - travel)
    across = rng.uniform(0.1, 0.9)
    drift = rng.uniform(-0.05, 0.05)
    a, b = (start, start + travel) if rng.random() < 0.5 else (start + travel, start)
    if rng.random() < 0.5:
        return [round(a, 8), round(across, 8)], [round(b, 8), round(across + drift, 8)]
    return [round(across, 8), round(a, 8)], [round(across + drift, 8), round(b, 8)]


def action(code, rng):
    if code == 4:
        t, l = click(rng) if rng.random() < 0.6 else scroll(rng)
        return {"type_code": 4, "touch": t, "lift": l, "text": ""}
    if code == 3:
        text = " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 3)))
        return {"type_code": 3, "touch": SENTINEL, "lift": SENTINEL, "text": text}
    return {"type_code": code, "touch": SENTINEL, "lift": SENTINEL, "text": ""}


def screen(rng, with_boxes):
    s = {"h": 2400, "w": 1080}
    if with_boxes and rng.random() < 0.5:
        boxes = []
        for _ in range(rng.randint(1, 3)):
            y, x = rng.uniform(0, 0.9), rng.uniform(0, 0.9)
            boxes.append([round(y, 4), round(x, 4), round(y + 0.08, 4), round(x + 0.08, 4)])
        s["boxes"] = boxes
    return s


def episode(idx, subset, mix, rng, with_boxes):
    k = rng.randint(1, 12)
    steps = []
    for t in range(k):
        if mix == "click":
            t_, l_ = click(rng)
            a = {"type_code": 4, "touch": t_, "lift": l_, "text": ""}
        elif mix == "scroll":
            t_, l_ = scroll(rng)
            a = {"type_code": 4, "touch": t_, "lift": l_, "text": ""}
        elif t == k - 1:
            a = action(10, rng)
        else:
            a = action(rng.choice([4, 4, 4, 3, 5, 6, 7]), rng)
        steps.append({"screen": screen(rng, with_boxes), "action": a})
    return {
        "id": f"{subset}-{mix}-{idx:04d}",
        "subset": subset,
        "goal": rng.choice(GOALS),
        "steps": steps,
    }


def write(name, episodes):
    with open(HERE / name, "w", encoding="utf-8", newline="\n") as f:
        for e in episodes:
            f.write(json.dumps(e, ensure_ascii=False) + "\n")


def main():
    rng = random.Random(20231120)
    write("general_mini.jsonl", [episode(i, "General", "mixed", rng, True) for i in range(10)])
    write("click_only.jsonl", [episode(i, "General", "click", rng, False) for i in range(40)])
    write("scroll_only.jsonl", [episode(i, "General", "scroll", rng, False) for i in range(40)])
    write(
        "mixed.jsonl",
        [episode(i, SUBSETS[i % 5], "mixed", rng, True) for i in range(50)],
    )


if __name__ == "__main__":
    main()
