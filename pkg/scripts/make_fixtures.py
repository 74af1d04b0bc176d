"""Regenerate the candidate files shipped in src/slnchar/fixtures/."""
from pathlib import Path

from slnchar.charcheck import candidate_to_jsonl, trivial_extension
from slnchar.subgroups import ball_enumerate

OUT = Path(__file__).resolve().parents[1] / "src" / "slnchar" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    delta = trivial_extension(3, None, ball_enumerate(3, 3))
    (OUT / "delta_n3_r3.jsonl").write_text(candidate_to_jsonl(delta))
    for chi, name in ((1, "plus"), (-1, "minus")):
        c = trivial_extension(4, chi, ball_enumerate(4, 2, central=True))
        (OUT / f"trivext_{name}_n4_r2.jsonl").write_text(candidate_to_jsonl(c))
    print("wrote", sorted(p.name for p in OUT.iterdir()))


if __name__ == "__main__":
    main()
