#!/usr/bin/env python3
"""Writes the annotated fixture corpus: one directory per site with page.html and gold.json."""

import argparse
import json
import pathlib
import random


def shell(title, body):
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<link rel="stylesheet" href="/static/site.css">
</head>
<body>
<div id="top"><a href="/">Home</a> | <a href="/help">Help</a> | <a href="/account">My account</a></div>
<div id="content">
{body}
</div>
<div id="footer"><p>Customer service open 9-17. Returns accepted within 30 days.</p></div>
</body>
</html>
"""


def price_list(cls, amounts, fmt):
    return "\n".join(f'<li><a href="/p/{i}">Item {i}</a> <span class="{cls}">{fmt(a)}</span></li>'
                     for i, a in enumerate(amounts, 1))


def eur(a):
    return f"&euro;{a:.2f}"


SITES = {}


def site(name, url, amount, currency, rng=None):
    def wrap(fn):
        SITES[name] = (url, amount, currency, rng, fn)
        return fn
    return wrap


@site("wiggle-groupset", "http://www.wiggle.test/shimano-ultegra-6800", 142.29, "EUR")
def _():
    return shell("Shimano Ultegra 6800 Groupset", """
<h1>Shimano Ultegra 6800 Groupset</h1>
<div class="Wprice">&euro;142.29</div>
<div class="saving">SAVE20%=&euro;57.71</div>
<p>In stock. Usually dispatched within 24 hours.</p>""")


@site("megastore-57", "http://megastore.test/pdp/city-bike-7", 349.00, "EUR")
def _():
    r = random.Random(57)
    amounts = lambda n: [r.randint(500, 90000) / 100 for _ in range(n)]
    tiles = "\n".join(
        f'<div class="tile"><a href="/pdp/{i}">Bike {i}</a><span class="tile-price">{eur(a)}</span></div>'
        for i, a in enumerate(amounts(20), 1))
    bundles = "\n".join(f'<div class="bundle">Bundle {i}: <strike>{eur(a)}</strike></div>'
                        for i, a in enumerate(amounts(12), 1))
    promos = "\n".join(f'<p class="promo">Save {eur(a)} on accessories</p>' for a in amounts(8))
    script = "<script>var prices = [" + ", ".join(f'"{eur(a)}"' for a in amounts(6)) + "];</script>"
    recent = "\n".join(f'<li class="rv-item">Light set {eur(a)}</li>' for a in amounts(10))
    was = "\n".join(f'<em class="was-price">was {eur(a)}</em><br>' for a in amounts(5))
    return shell("City bike 7", f"""
<h1>City bike 7 speed</h1>
<div class="pdp-price-current">&euro;349.00</div>
<p>Aluminium frame, 7 gears, hub dynamo.</p>
<div class="bundles">
{bundles}
</div>
<div class="promos">
{promos}
</div>
<div class="older">
{was}
</div>
<div class="related">
{tiles}
</div>
<ul class="recently-viewed">
{recent}
</ul>
{script}""")


@site("euro-glyph-comma", "http://fietsen.test/zadel-comfort", 19.95, "EUR")
def _():
    return shell("Zadel comfort", """
<h1>Zadel comfort</h1>
<p class="old"><strike>24,95 €</strike></p>
<span class="prijs">19,95 €</span>""")


@site("dollar-thousands", "http://shop.test/espresso-machine", 1299.00, "USD")
def _():
    return shell("Espresso machine", """
<h1>Dual boiler espresso machine</h1>
<div class="list">List price: $1,499.00</div>
<span class="our-price">$1,299.00</span>""")


@site("pound-rrp", "http://uk-cycles.test/helmet", 34.99, "GBP")
def _():
    return shell("Road helmet", """
<h1>Road helmet</h1>
<p class="now">&pound;34.99</p>
<p class="rrp">RRP &pound;49.99</p>""")


@site("numeric-entity", "http://velo.test/wheelset", 72.50, "EUR")
def _():
    acc = "\n".join(f'<li><i class="acc">&#8364;{a:.2f}</i></li>' for a in (9.99, 4.50, 12.00))
    return shell("Wheelset", f"""
<h1>Wheelset</h1>
<b class="amount">&#8364;72.50</b>
<ul class="accessories">
{acc}
</ul>""")


@site("code-after", "http://kamera.test/objektiv-50mm", 149.00, "EUR")
def _():
    return shell("Objektiv 50mm", """
<h1>Objektiv 50mm f/1.8</h1>
<span class="value">149.00 EUR</span>
<p class="voucher">Newsletter: 5.00 EUR off your next order</p>""")


@site("range-sale", "http://outdoor.test/tent", 99.00, "USD", (99.00, 149.00))
def _():
    return shell("Tent", """
<h1>Tent, 2 to 4 persons</h1>
<div class="range"><span class="from">$99.00</span> &ndash; <span class="upto">$149.00</span></div>""")


@site("jsonld-script", "http://books.test/atlas", 12.00, "GBP")
def _():
    return shell("World atlas", """
<h1>World atlas</h1>
<script type="application/ld+json">{"@type": "Offer", "priceCents": 1200, "priceCurrency": "GBP"}</script>
<div class="price">&pound;12.00</div>""")


@site("carousel", "http://toys.test/train-set", 59.90, "EUR")
def _():
    return shell("Train set", f"""
<h1>Wooden train set</h1>
<div class="buy"><span class="sell">&euro;59.90</span></div>
<ul class="carousel">
{price_list("carousel-price", [14.99, 22.50, 9.95, 31.00, 18.75], eur)}
</ul>""")


@site("tiles-prefix", "http://garden.test/hose", 27.45, "EUR")
def _():
    tiles = "\n".join(f'<div class="product-tile-{c}">Reel {c.upper()} &euro;{a:.2f}</div>'
                      for c, a in (("a", 11.00), ("b", 13.50), ("c", 19.99)))
    return shell("Garden hose", f"""
<h1>Garden hose 25 m</h1>
<span class="main-price">&euro;27.45</span>
{tiles}""")


@site("malformed", "http://retro.test/lamp", 45.00, "EUR")
def _():
    return shell("Desk lamp", """
<h1>Desk lamp
<p>Brass finish
<p>Bulb not included
<table><tr><td class=price>&euro;45</td></tr></table>
<ul><li>Height 40 cm<li>Cable 1.8 m</ul>""")


@site("old-table", "http://oldshop.test/item?id=881", 59.90, "EUR")
def _():
    return shell("Item 881", """
<table width="100%"><tr>
<td><img src="/img/881.jpg" alt="item"></td>
<td class="pr"><font color="red">&euro;59,90</font></td>
</tr></table>""")


@site("was-now", "http://fashion.test/jacket", 59.99, "USD")
def _():
    return shell("Rain jacket", """
<h1>Rain jacket</h1>
<span class="was">Was $79.99</span>
<span class="now">Now $59.99</span>""")


@site("discount-badge", "http://tools.test/drill", 89.00, "EUR")
def _():
    return shell("Cordless drill", """
<h1>Cordless drill 18V</h1>
<div class="badge">Discount &euro;15.00 with code SPRING</div>
<div class="pricing">&euro;89.00</div>""")


@site("usd-code", "http://gadgets.test/charger", 24.00, "USD")
def _():
    return shell("USB charger", """
<h1>USB charger 65W</h1>
<p class="cost">USD 24.00</p>""")


@site("gbp-glyph-thousands", "http://bikes.test/carbon-frame", 2450.00, "GBP")
def _():
    return shell("Carbon frame", """
<h1>Carbon frame</h1>
<div class="price-now">£2,450.00</div>
<div class="finance">Save £120.00 with the annual plan</div>""")


@site("euro-thousands-dot", "http://moebel.test/sofa", 1299.00, "EUR")
def _():
    return shell("Sofa", """
<h1>Sofa, drei Sitze</h1>
<span class="preis">1.299,00 €</span>""")


@site("integer-price", "http://prints.test/poster", 95.00, "EUR")
def _():
    return shell("Poster", """
<h1>Poster 50 x 70</h1>
<p class="kosten">&euro; 95</p>""")


@site("single-price", "http://run.test/trail-shoe", 89.95, "USD")
def _():
    return shell("Trail shoe", """
<div class="product"><h1>Trail shoe</h1><p class="price-now">$89.95</p></div>""")


@site("clue-in-attribute", "http://audio.test/headphones", 129.00, "EUR")
def _():
    return shell("Headphones", """
<h1>Headphones</h1>
<div class="buy-box"><div class="price" data-currency="EUR">129.00</div></div>""")


@site("voucher-off", "http://kitchen.test/kettle", 39.99, "USD")
def _():
    return shell("Kettle", """
<h1>Kettle 1.7 l</h1>
<div class="kettle-price">$39.99</div>
<p class="first">Get $10 off your first order</p>""")


@site("sup-symbol", "http://phones.test/case", 64.90, "USD")
def _():
    return shell("Phone case", """
<h1>Phone case</h1>
<span class="price"><sup>$</sup>64.90</span>""")


@site("script-and-strike", "http://music.test/guitar", 549.00, "GBP")
def _():
    return shell("Acoustic guitar", """
<h1>Acoustic guitar</h1>
<script>window.dataLayer = [{"value": 549.00, "currency": "GBP", "list": 599.00}];</script>
<strike>&pound;599.00</strike>
<strong class="current">&pound;549.00</strong>""")


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", type=pathlib.Path, default=root / "fixtures" / "corpus",
                        help="output directory (default: fixtures/corpus)")
    out = parser.parse_args().out_dir
    for name, (url, amount, currency, rng, fn) in SITES.items():
        d = out / name
        d.mkdir(parents=True, exist_ok=True)
        (d / "page.html").write_text(fn(), encoding="utf-8")
        gold = {"url": url, "amount": amount, "currency": currency}
        if rng:
            gold["range"] = {"min": rng[0], "max": rng[1]}
        (d / "gold.json").write_text(json.dumps(gold, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(SITES)} sites to {out}")


if __name__ == "__main__":
    main()
