#!/usr/bin/env python3
"""Generate the bundled replay fixtures.

Synthetic, seeded data for five tickers plus an index benchmark, covering
enough history before the evaluation window for 100-bar indicators. A few
closes are pinned so tests can refer to exact prices.

Usage: make_fixtures.py [OUT_DIR]
"""

import datetime as dt
import json
import random
import sys
from pathlib import Path

TICKERS = {
    # ticker: (start close, daily drift, daily vol, base volume, name)
    "AAPL": (226.0, 0.0002, 0.016, 52_000_000, "Apple"),
    "AXP": (270.0, 0.0003, 0.015, 3_100_000, "American Express"),
    "BAC": (41.5, 0.0002, 0.014, 38_000_000, "Bank of America"),
    "KO": (70.0, 0.0001, 0.008, 14_000_000, "Coca-Cola"),
    "CVX": (149.0, 0.0002, 0.013, 7_500_000, "Chevron"),
}
BENCHMARK = ("SPX", 5700.0, 0.0002, 0.009, 0)

HISTORY_START = dt.date(2024, 10, 1)
START = dt.date(2025, 3, 17)
END = dt.date(2025, 4, 17)

HOLIDAYS = {
    dt.date(2024, 11, 28),
    dt.date(2024, 12, 25),
    dt.date(2025, 1, 1),
    dt.date(2025, 1, 9),
    dt.date(2025, 1, 20),
    dt.date(2025, 2, 17),
}

PINNED = {
    "CVX": {
        dt.date(2025, 3, 28): 166.47,
        dt.date(2025, 3, 31): 168.51,
        dt.date(2025, 4, 1): 167.29,
        dt.date(2025, 4, 2): 166.06,
        dt.date(2025, 4, 3): 156.12,
    },
    "AAPL": {
        dt.date(2025, 4, 8): 172.42,
        dt.date(2025, 4, 9): 198.85,
    },
}

# Market-wide daily moves layered on top of the random walk in early April.
SHOCKS = {
    dt.date(2025, 4, 3): -0.048,
    dt.date(2025, 4, 4): -0.058,
    dt.date(2025, 4, 7): -0.002,
    dt.date(2025, 4, 8): -0.016,
    dt.date(2025, 4, 9): 0.095,
    dt.date(2025, 4, 10): -0.035,
}


def trading_days(first, last):
    d = first
    out = []
    while d <= last:
        if d.weekday() < 5 and d not in HOLIDAYS:
            out.append(d)
        d += dt.timedelta(days=1)
    return out


def r2(x):
    return float(f"{x:.2f}")


def price_path(rng, days, start, drift, vol, pins):
    closes = []
    c = start
    for d in days:
        c = c * (1.0 + drift + SHOCKS.get(d, 0.0) + rng.gauss(0.0, vol))
        c = max(c, 1.0)
        closes.append(r2(c))
    # Pinned closes replace the walk; the following days continue from them.
    if pins:
        for i, d in enumerate(days):
            if d in pins:
                ratio = pins[d] / closes[i]
                closes[i] = pins[d]
                j = i + 1
                while j < len(days) and days[j] not in pins:
                    closes[j] = r2(closes[j] * ratio)
                    j += 1
    return closes


def bars_for(rng, days, closes, base_volume):
    out = []
    prev = closes[0]
    for d, c in zip(days, closes):
        o = r2(prev * (1.0 + rng.gauss(0.0, 0.004)))
        hi = r2(max(o, c) * (1.0 + abs(rng.gauss(0.0, 0.006))))
        lo = r2(min(o, c) * (1.0 - abs(rng.gauss(0.0, 0.006))))
        vol = int(base_volume * (0.7 + 0.6 * rng.random())) if base_volume else 0
        if d in SHOCKS and base_volume:
            vol = int(vol * 1.8)
        out.append({"date": d.isoformat(), "open": o, "high": hi, "low": lo, "close": c, "volume": vol})
        prev = c
    return out


COMPANY_TEMPLATES = [
    ("{name} shares move after analyst revises price target", "A brokerage adjusted its target on {t}, citing demand trends."),
    ("{name} announces quarterly dividend", "The board of {name} declared its regular quarterly dividend."),
    ("{name} executive comments on supply chain costs", "Management of {name} discussed input costs at an industry conference."),
    ("{name} expands share repurchase program", "{name} said it would add to its existing buyback authorization."),
    ("Options traders position for volatility in {t}", "Implied volatility in {t} options rose ahead of macro data."),
    ("{name} faces questions over tariff exposure", "Analysts asked how new import duties could affect {name} margins."),
]

POLICY_NEWS = [
    ("2025-03-19", "Central bank holds benchmark rate steady", "Policymakers left the federal funds target range unchanged and kept two cuts in their projections."),
    ("2025-03-26", "Administration signals broad import duties ahead", "Officials said a wide set of tariffs would be announced in early April."),
    ("2025-04-02", "Sweeping reciprocal tariffs announced on trading partners", "A baseline duty on most imports was unveiled along with higher country-specific rates."),
    ("2025-04-03", "Markets slide as tariff scope surprises investors", "Equities fell sharply as the breadth of the new duties exceeded expectations."),
    ("2025-04-04", "Trading partner retaliates with counter-tariffs", "A major economy announced matching duties on imported goods."),
    ("2025-04-07", "Treasury yields swing as recession fears grow", "Bond markets saw heavy volatility amid concerns over trade policy."),
    ("2025-04-09", "White House pauses most new tariffs for 90 days", "Country-specific rates were suspended for most partners while a baseline duty stays in place."),
    ("2025-04-10", "Tariff pause sparks relief rally across sectors", "Investors welcomed the temporary suspension, lifting stocks broadly."),
    ("2025-04-10", "Negotiators prepare talks during tariff suspension", "Officials said trade discussions would proceed during the pause period."),
    ("2025-04-14", "Electronics carved out from some new duties", "Certain consumer electronics were exempted from reciprocal tariffs."),
    ("2025-04-16", "Central bank chair warns tariffs may lift inflation", "The chair said higher duties could push prices up and slow growth."),
]

INSIDER_ROLES = ["CEO", "CFO", "Director", "EVP", "General Counsel"]
INSIDER_NAMES = ["J. Carter", "M. Alvarez", "S. Chen", "R. Okafor", "L. Novak", "D. Fischer"]


def write_jsonl(path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures/bundled")
    rng = random.Random(20250417)
    days = trading_days(HISTORY_START, END)
    window = [d for d in days if START <= d <= END]
    assert len(window) == 24, len(window)

    manifest = {
        "tickers": list(TICKERS),
        "start": START.isoformat(),
        "end": END.isoformat(),
        "benchmark": BENCHMARK[0],
    }
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    for t, (start, drift, vol, base_volume, name) in TICKERS.items():
        closes = price_path(rng, days, start, drift, vol, PINNED.get(t))
        write_jsonl(out / t / "ohlcv.jsonl", bars_for(rng, days, closes, base_volume))

        news = []
        for d in days:
            if d < dt.date(2025, 2, 1) or rng.random() > 0.35:
                continue
            head, summary = rng.choice(COMPANY_TEMPLATES)
            news.append({
                "date": d.isoformat(),
                "headline": head.format(name=name, t=t),
                "summary": summary.format(name=name, t=t),
                "source": rng.choice(["Wire Service", "Market Daily", "Financial Desk"]),
                "scope": "Company",
                "ticker": t,
            })
        write_jsonl(out / t / "news.jsonl", news)

        insider = []
        for d in days:
            if d < dt.date(2024, 12, 1) or rng.random() > 0.08:
                continue
            idx = days.index(d)
            buy = rng.random() < 0.4
            insider.append({
                "date": d.isoformat(),
                "ticker": t,
                "insider_name": rng.choice(INSIDER_NAMES),
                "role": rng.choice(INSIDER_ROLES),
                "kind": "InsiderBuy" if buy else "InsiderSell",
                "shares": rng.randrange(500, 40_000, 100),
                "price": closes[idx],
            })
        write_jsonl(out / t / "insider.jsonl", insider)

        fundamentals = []
        revenue = {"AAPL": 95e9, "AXP": 16e9, "BAC": 26e9, "KO": 11.5e9, "CVX": 48e9}[t]
        for q, period_end in enumerate(["2024-06-30", "2024-09-30", "2024-12-31", "2025-03-31"]):
            rev = revenue * (1.0 + 0.02 * q + rng.gauss(0.0, 0.02))
            gross = 0.30 + 0.4 * rng.random()
            net = gross * (0.25 + 0.2 * rng.random())
            fundamentals.append({
                "ticker": t,
                "period_end": period_end,
                "revenue": r2(rev),
                "net_income": r2(rev * net),
                "gross_margin": round(gross, 4),
                "net_margin": round(net, 4),
                "pe_ratio": round(12 + 20 * rng.random(), 2),
                "pb_ratio": round(1 + 8 * rng.random(), 2),
            })
        write_jsonl(out / t / "fundamentals.jsonl", fundamentals)

    sym, start, drift, vol, _ = BENCHMARK
    closes = price_path(rng, days, start, drift, vol, None)
    write_jsonl(out / sym / "ohlcv.jsonl", bars_for(rng, days, closes, 0))

    write_jsonl(out / "_policy" / "news.jsonl", [
        {"date": d, "headline": h, "summary": s, "source": "Policy Wire", "scope": "Policy"}
        for d, h, s in POLICY_NEWS
    ])

    macro = []
    for month in range(10, 17):
        y, m = (2024, month) if month <= 12 else (2025, month - 12)
        d = dt.date(y, m, 12).isoformat()
        macro.append({"name": "CPI YoY", "date": d, "value": round(2.4 + 0.3 * rng.random(), 2), "unit": "percent"})
        macro.append({"name": "Unemployment rate", "date": d, "value": round(4.0 + 0.2 * rng.random(), 2), "unit": "percent"})
        macro.append({"name": "Federal funds rate", "date": d, "value": 4.33 if (y, m) >= (2024, 12) else 4.58, "unit": "percent"})
    macro.append({"name": "Real GDP growth (annualized)", "date": "2025-01-30", "value": 2.3, "unit": "percent"})
    macro.sort(key=lambda r: r["date"])
    write_jsonl(out / "_macro" / "indicators.jsonl", macro)


if __name__ == "__main__":
    main()
