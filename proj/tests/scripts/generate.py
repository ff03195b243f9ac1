#!/usr/bin/env python3
"""Writes the recorded edit-script corpus (deterministic)."""
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

FIXED = {
    "times_plus": ["key 2", "key *", "key 3", "key +", "key 4"],
    "blackbox": ["key 3", "key +", "key 2", "press left", "press backspace",
                      "press backspace", "key +", "key -"],
    "legacy_sinx": ["mode legacy", "key y", "key =", "key s", "key i", "key n", "key x"],
    "legacy_2aab": ["mode legacy", "key y", "key =", "key 2", "key a", "key a", "key b"],
    "legacy_fraction": ["mode legacy"] + [f"key {c}" for c in "y=1/x+1"],
    "basic_fraction": [f"key {c}" for c in "y=1/x+1"],
    "leq_undo": ["key a", "key <", "key =", "key b", "undo", "undo"],
    "brackets": ["key (", "key 1", "key +", "key 2", "key )", "key *", "key 3"],
    "bracket_revert": ["key 2", "key *", "key (", "key 3", "key +", "key 4", "bracket close",
                       "press backspace"],
    "templates": ["template sqrt", "key x", "press right", "key +", "template divide", "key 1",
                  "press down", "key 2"],
    "clipboard": ["key 1", "key +", "key 2", "select 0/0:0 0/0:3", "copy", "press end", "key *",
                  "paste"],
    "cut_paste": ["key a", "key +", "key b", "select 0/0:2 0/0:3", "cut", "key c", "paste"],
}

KEYS = list("0123456789.abxysincolgept+-*/^=<>()") + ["×", "≤", "±"]
PRESS = ["backspace", "delete", "left", "right", "up", "down", "home", "end"]
TEMPLATES = ["plus", "minus", "times", "divide", "power", "sqrt", "abs", "bracket-round",
             "sin", "cos", "ln", "eq", "leq", "plus-minus"]


def random_script(rng):
    lines = []
    for _ in range(rng.randint(3, 40)):
        r = rng.random()
        if r < 0.55:
            lines.append(f"key {rng.choice(KEYS)}")
        elif r < 0.68:
            lines.append(f"press {rng.choice(PRESS)}")
        elif r < 0.76:
            lines.append(f"template {rng.choice(TEMPLATES)}")
        elif r < 0.80:
            lines.append(f"bracket {rng.choice(['open', 'close'])}")
        elif r < 0.84:
            a, b = rng.randint(0, 3), rng.randint(0, 3)
            lines.append(f"select 0/0:{a} 0/0:{b}")
        elif r < 0.92:
            lines.append(rng.choice(["cut", "copy", "paste", "undo", "redo"]))
        else:
            lines.append(f"mode {rng.choice(['legacy', 'basic'])}")
    return lines


def main():
    for old in HERE.glob("*.script"):
        old.unlink()
    for name, lines in FIXED.items():
        (HERE / f"{name}.script").write_text("\n".join(lines) + "\n", encoding="utf-8")
    rng = random.Random(20240611)
    for i in range(100 - len(FIXED)):
        lines = random_script(rng)
        text = f"# recorded session {i:03d}\n" + "\n".join(lines) + "\n"
        (HERE / f"session_{i:03d}.script").write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
