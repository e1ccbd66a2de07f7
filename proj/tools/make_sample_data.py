#!/usr/bin/env python3
"""Regenerates the synthetic sample archive under data/.

The rows follow the public ATP match-archive column layout. Outcomes are
drawn from the logistic ratio model at alpha = 0.87, and a few rows are
deliberately broken (zero points, missing points, challenger level,
qualifying rounds, walkovers) to exercise the ingestion filters.
"""
import csv
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"
COLUMNS = [
    "tourney_id", "tourney_name", "surface", "draw_size", "tourney_level", "tourney_date", "match_num",
    "winner_id", "winner_name", "winner_rank", "winner_rank_points",
    "loser_id", "loser_name", "loser_rank", "loser_rank_points", "score", "best_of", "round",
]
TOURNEYS = [
    ("2016-580", "Australian Open", "Hard", 128, "G", "20160118"),
    ("2016-407", "Rotterdam", "Hard", 32, "A", "20160208"),
    ("2016-495", "Dubai", "Hard", 32, "A", "20160222"),
    ("2016-404", "Indian Wells Masters", "Hard", 128, "M", "20160310"),
    ("2016-425", "Barcelona", "Clay", 48, "A", "20160418"),
    ("2016-520", "Roland Garros", "Clay", 128, "G", "20160522"),
    ("2016-311", "Queen's Club", "Grass", 32, "A", "20160613"),
    ("2016-M-DC-2016-WG-M-GBR-SRB-01", "Davis Cup WG QF: GBR vs SRB", "Grass", 4, "D", "20160715"),
    ("2016-418", "Washington", "Hard", 48, "A", "20160718"),
    ("2016-0421", "Cincinnati Masters", "Hard", 56, "M", "20160815"),
    ("2016-314", "Gstaad", "Clay", 28, "A", "20160725"),
    ("2016-329", "Tokyo", "Hard", 32, "A", "20161003"),
    ("2016-337", "Vienna", "Hard", 32, "A", "20161024"),
    ("2016-328", "Basel", "Hard", 32, "A", "20161024"),
    ("2016-341", "Stockholm", "Hard", 28, "A", "20161017"),
    ("2017-580", "Australian Open", "Hard", 128, "G", "20170116"),
    ("2017-375", "Montpellier", "Hard", 28, "A", "20170206"),
    ("2017-6932", "Rio de Janeiro", "Clay", 32, "A", "20170220"),
    ("2017-807", "Acapulco", "Hard", 32, "A", "20170227"),
    ("2017-404", "Indian Wells Masters", "Hard", 128, "M", "20170309"),
]
ROUNDS = ["R64", "R32", "R16", "QF", "SF", "F"]


def main():
    rng = random.Random(20170320)
    players = []
    for k in range(120):
        pts = round(9000.0 * math.exp(-k / 19.0)) + 20
        players.append((100001 + k, f"Player {k + 1:03d}", k + 1, pts))

    rows = []
    for tid, name, surface, draw, level, date in TOURNEYS:
        n = {"G": 14, "M": 12, "D": 3}.get(level, 8)
        for m in range(n):
            a, b = rng.sample(players, 2)
            ra = max(1, round(a[3] * rng.uniform(0.85, 1.15)))
            rb = max(1, round(b[3] * rng.uniform(0.85, 1.15)))
            x = (ra / rb) ** 0.87
            if rng.random() < x / (1 + x):
                w, wp, l, lp = a, ra, b, rb
            else:
                w, wp, l, lp = b, rb, a, ra
            round_tag = "RR" if level == "D" else rng.choice(ROUNDS)
            rows.append({
                "tourney_id": tid, "tourney_name": name, "surface": surface, "draw_size": draw,
                "tourney_level": level, "tourney_date": date, "match_num": m + 1,
                "winner_id": w[0], "winner_name": w[1], "winner_rank": w[2], "winner_rank_points": wp,
                "loser_id": l[0], "loser_name": l[1], "loser_rank": l[2], "loser_rank_points": lp,
                "score": "6-4 6-4", "best_of": 5 if level == "G" else 3, "round": round_tag,
            })

    def tweak(i, **kw):
        rows[i].update(kw)

    for i in (3, 17, 41, 77, 120, 150):
        tweak(i, loser_rank_points=0, loser_rank="")
    for i in (9, 99):
        tweak(i, winner_rank_points=0, winner_rank="")
    for i in (22, 63, 111, 140):
        tweak(i, loser_rank_points="")
    tweak(130, winner_rank_points="")
    for i in (5, 55, 105):
        tweak(i, round="Q1")
    tweak(85, round="Q2")
    for i in (12, 70):
        tweak(i, score="W/O")
    tweak(33, tourney_date="2016013")

    for m in range(6):
        a, b = rng.sample(players[40:], 2)
        rows.append({
            "tourney_id": "2016-7161", "tourney_name": "Heilbronn CH", "surface": "Clay", "draw_size": 32,
            "tourney_level": "C", "tourney_date": "20160509", "match_num": m + 1,
            "winner_id": a[0], "winner_name": a[1], "winner_rank": a[2], "winner_rank_points": a[3],
            "loser_id": b[0], "loser_name": b[1], "loser_rank": b[2], "loser_rank_points": b[3],
            "score": "7-6(4) 6-3", "best_of": 3, "round": "R32",
        })

    with open(OUT / "sample_matches.csv", "w", newline="") as f:
        wr = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)

    # Ranking snapshots. 2017-03-20 pins ranks 16/32/64 to 2425/1265/773.
    def snapshot(date, n, anchors):
        # piecewise log-log interpolation between anchor ranks
        keys = sorted(anchors)
        out = []
        for r in range(1, n + 1):
            lo = max(k for k in keys if k <= r)
            hi = min((k for k in keys if k >= r), default=lo)
            if lo == hi:
                pts = anchors[lo]
            else:
                t = (math.log(r) - math.log(lo)) / (math.log(hi) - math.log(lo))
                pts = round(math.exp((1 - t) * math.log(anchors[lo]) + t * math.log(anchors[hi])))
            out.append([date, r, players[r - 1][0], pts])
        return out

    ranks = []
    ranks += snapshot("20161226", 40, {1: 11500, 16: 2300, 32: 1210, 40: 1020})
    ranks += snapshot("20170313", 80, {1: 11800, 16: 2380, 32: 1240, 64: 760, 80: 640})
    ranks += snapshot("20170320", 80, {1: 12030, 16: 2425, 32: 1265, 64: 773, 80: 650})
    with open(OUT / "sample_rankings.csv", "w", newline="") as f:
        wr = csv.writer(f, lineterminator="\n")
        wr.writerow(["ranking_date", "rank", "player", "points"])
        wr.writerows(ranks)


if __name__ == "__main__":
    main()
