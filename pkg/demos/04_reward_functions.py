"""Explore the reward surface a generation policy would be trained on.

The match reward saturates once the generated path count reaches the
reference count and decays exponentially below it. The literal variant
of the published expression instead pays a premium for undershooting,
which is why it is not the default; both are shown side by side.
"""

from svgforge import (
    MatchSemantics,
    RewardParams,
    integrity_indicator,
    match_reward,
    total_reward,
)


def svg_with_paths(n: int) -> str:
    body = "".join(
        f'<path d="M{20 * i} 0L{20 * i + 10} 0L{20 * i + 10} 10Z" fill="#000000"/>'
        for i in range(n)
    )
    return f'<svg viewBox="0 0 1024 1024">{body}</svg>'


def reward_curve() -> None:
    reference = svg_with_paths(6)
    prose = RewardParams()
    literal = RewardParams(match_semantics=MatchSemantics.LITERAL_FORMULA)
    print("match reward vs generated path count (reference has 6 paths):")
    print(f"  {'N':>3} {'delta':>6} {'default':>10} {'literal':>10}")
    for n in range(1, 11):
        generated = svg_with_paths(n)
        p = match_reward(generated, reference, prose)
        l = match_reward(generated, reference, literal)
        print(f"  {n:>3} {n - 6:>6} {p:>10.6f} {l:>10.6f}")
    print("  (the literal formula pays e^{+gamma} per missing path: that is")
    print("   the published expression taken at face value, kept for study)\n")


def integrity_examples() -> None:
    good = svg_with_paths(3)
    cases = {
        "well-formed": good,
        "truncated mid-element": good[: len(good) // 2],
        "missing closing tag": good.replace("</svg>", ""),
        "broken path data": good.replace("L10 0", "L10 @", 1),
        "empty svg": '<svg viewBox="0 0 10 10"></svg>',
    }
    print("integrity indicator:")
    for label, text in cases.items():
        print(f"  {label:<24} -> {integrity_indicator(text)}")
    print()


def full_breakdown() -> None:
    reference = svg_with_paths(4)
    print("total reward breakdown (alpha = beta = gamma = 1):")
    for label, generated in [
        ("matches reference", svg_with_paths(4)),
        ("two paths short", svg_with_paths(2)),
        ("three paths extra", svg_with_paths(7)),
        ("truncated output", svg_with_paths(4)[:80]),
    ]:
        r = total_reward(generated, reference)
        print(f"  {label:<18} integrity={r.integrity:.3f} match={r.match:.6f} "
              f"total={r.total:.6f} (N={r.n_generated} vs {r.n_reference})")


if __name__ == "__main__":
    reward_curve()
    integrity_examples()
    full_breakdown()
