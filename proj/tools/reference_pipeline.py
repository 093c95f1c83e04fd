#!/usr/bin/env python3
# Straight-line brute-force reference for the full pipeline: matching by
# trying every term at every position, then classification, normalization and
# aggregation, emitting the same five artifacts as `fundscape run`. Usage:
#   python3 tools/reference_pipeline.py data/synthetic/config.json data/golden
import json, os, re, sys, unicodedata
VERSION = "0.1.0"
SPACES = set("\t\n\v\f\r     　") | {chr(c) for c in range(0x2000, 0x200B)}
HYPHENS = set("-−") | {chr(c) for c in range(0x2010, 0x2016)}
EXTRA = {"æ": "ae", "œ": "oe", "ø": "o", "ß": "ss", "ð": "d", "þ": "th", "đ": "d", "ħ": "h",
         "ı": "i", "ĳ": "ij", "ĸ": "k", "ł": "l", "ŉ": "n", "ŋ": "n", "ſ": "s", "ŀ": "l", "ŧ": "t"}

def fold(raw):
    out, begs, ends, bpos = [], [], [], 0
    for ch in raw:
        blen = len(ch.encode("utf-8"))
        if ch in SPACES or ch in HYPHENS: mapped = " "
        elif ch in "‘’": mapped = "'"
        elif ch in "“”": mapped = '"'
        else:
            low = ch.lower()
            bare = "".join(c for c in unicodedata.normalize("NFD", low)
                           if not unicodedata.combining(c))
            mapped = bare if bare.isascii() else EXTRA.get(low, low)
        for c in mapped:
            if c == " " and out and out[-1] == " ": continue
            out.append(c); begs.append(bpos); ends.append(bpos + blen)
        bpos += blen
    folded = "".join(out)
    assert folded.isascii(), "reference folding only covers the fixture charset"
    return folded, begs, ends
def norm(s): return fold(s)[0].strip()
def word(c): return c.isalnum() and c.isascii()
def scan(terms, folded):  # terms: {pattern: sorted ids}; every pattern at every position
    cands = [(p, p + len(t), t, ids) for t, ids in terms.items()
             for p in range(0, len(folded) - len(t) + 1)
             if folded[p:p + len(t)] == t
             and (p == 0 or not word(folded[p - 1]))
             and (p + len(t) == len(folded) or not word(folded[p + len(t)]))]
    cands.sort(key=lambda c: (c[0], -c[1]))
    out, i = [], 0
    while i < len(cands):  # longest match wins at equal start
        out.append(cands[i]); start = cands[i][0]
        while i < len(cands) and cands[i][0] == start: i += 1
    return out
def parse_fa(text):  # restricted mirror of the fallback FA parser
    mentions = []
    for piece in [p.strip() for p in text.split(";") if p.strip()]:
        org, grants, m = piece, [], True
        while m:
            m = re.search(r"\s*[(\[]([^)\]]*)[)\]]$", org)
            if not m: break
            toks = [t for t in re.split(r"[,;\s]+", m.group(1)) if t]
            if not all(re.fullmatch(r"[A-Za-z0-9][A-Za-z0-9/.\-]*", t)
                       and any(ch.isdigit() for ch in t) for t in toks) or not toks: break
            grants = toks + grants; org = org[:m.start()]
        org = org.strip().rstrip(",.").strip()
        mentions.append({"org": org or piece, "grants": grants})
    return mentions
def flagged(term, common):  # min length 4, common word, dictionary-word acronym (<= 5 caps)
    return len(term) < 4 or norm(term) in common
def scope_of(entry, focal, embo_european):
    if entry is None: return "OtherOrUnknown"
    t, c = entry["org_type"], entry["country"]
    if t == "ECFrameworkProgram": return "European"
    if t == "PanEuropeanNonEC": return "European" if embo_european else "OtherOrUnknown"
    public = t in ("NationalAgency", "Charity", "RegionalPublic", "OtherPublic")
    if public and c and c == focal: return "NationalFocal"
    if public and c: return "ForeignPublic"
    return "OtherOrUnknown"
def category_of(scopes, fa_present):
    if not fa_present or not scopes: return "NonFunded"
    eu, nat = "European" in scopes, "NationalFocal" in scopes
    if eu and nat: return "NationalAndEuropean"
    return "European" if eu else "National" if nat else "Other"
def load_jsonl(path):
    lines = [l.strip() for l in open(path, encoding="utf-8")]
    return [json.loads(l) for l in lines if l and not l.startswith("#")]
def jdump(o): return json.dumps(o, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
def emit(o):  # plot-data json with %.6f floats, sorted keys
    if isinstance(o, dict):
        return "{" + ",".join('"%s":%s' % (k, emit(o[k])) for k in sorted(o)) + "}"
    return str(o) if isinstance(o, int) else ("null" if o is None else "%.6f" % o)
def main():
    cfg_path, out_dir = sys.argv[1], sys.argv[2]
    cfg = json.load(open(cfg_path)); base = os.path.dirname(cfg_path)
    root = os.path.join(os.path.dirname(__file__), "..")
    def lines(path): return [l.strip() for l in open(path, encoding="utf-8")
                             if l.strip() and not l.startswith("#")]
    common = {w.lower() for w in lines(os.path.join(root, "data", "common_words.txt"))}
    corpus = load_jsonl(os.path.join(base, cfg["corpus"]))
    world = load_jsonl(os.path.join(base, cfg["reference_corpus"]))
    whitelist = set(lines(os.path.join(base, cfg["category_whitelist"])))
    alias, terms = {}, {}
    for row in open(os.path.join(base, cfg["funders"]), encoding="utf-8").read().splitlines()[1:]:
        fid, name, aliases, country, org_type = row.split(",")
        e = {"funder_id": fid, "country": country, "org_type": org_type}
        for a in [name] + [x for x in aliases.split("|") if x]: alias[norm(a)] = e
    for row in open(os.path.join(base, cfg["lexicon"]), encoding="utf-8").read().splitlines()[1:]:
        did, preferred = row.split(",")[:2]
        if not flagged(preferred, common): terms.setdefault(norm(preferred), []).append(did)
    terms = {t: sorted(ids) for t, ids in terms.items()}
    period, focal = cfg["period"], cfg["focal_countries"]
    analyzed = [r for r in corpus if period["start"] <= r["year"] <= period["end"]
                and any(c in focal for c in r["countries"])
                and any(c in whitelist for c in r["categories"])]
    matched, matched_lines = [], []
    for r in analyzed:
        fields = [("title", 0, r["title"]), ("abstract", 0, r.get("abstract", ""))] + \
                 [("keyword", i, k) for i, k in enumerate(r.get("keywords", []))]
        spans = []
        for fname, idx, text in fields:
            if not text: continue
            folded, begs, ends = fold(text)
            spans += [{"field": fname, "field_index": idx, "start": a, "end": e,
                       "orig_start": begs[a], "orig_end": ends[e - 1], "term": t,
                       "disease_id": did}
                      for a, e, t, ids in scan(terms, folded) for did in ids]
        if spans:
            matched.append(r)
            matched_lines.append(jdump({"record_id": r["id"], "spans": spans,
                                        "disease_ids": sorted({x["disease_id"] for x in spans})}))
    cells = {}
    for r in world:
        for cat in r["categories"]:
            c = cells.setdefault((cat, r["year"], r["doc_type"]), [0, 0.0])
            c[0] += 1; c[1] += float(r["citations"])
    def ncs_of(r):
        ms = [cells[k][1] / cells[k][0]
              for k in ((c, r["year"], r["doc_type"]) for c in sorted(r["categories"]))]
        expected = sum(ms) / len(ms)
        return r["citations"] / expected if expected > 0 else None
    class_lines, tagged = [], []
    for r in matched:
        fa_present = r.get("funding") is not None
        mentions = r.get("funding") or []
        if fa_present and not mentions and r.get("fa_text"): mentions = parse_fa(r["fa_text"])
        for country in sorted(set(r["countries"])):
            if country not in focal: continue
            resolved = [(m, alias.get(norm(m["org"]))) for m in mentions]
            classes = [{"org": m["org"], "grants": m.get("grants", []),
                        "funder_id": e["funder_id"] if e else None,
                        "org_type": e["org_type"] if e else "Unknown",
                        "country": (e["country"] or None) if e else None,
                        "scope": scope_of(e, country, cfg["embo_as_european"]),
                        "match": "exact" if e else "none"} for m, e in resolved]
            cat = category_of({c["scope"] for c in classes}, fa_present)
            class_lines.append(jdump({"record_id": r["id"], "focal_country": country,
                                      "category": cat, "classes": classes}))
            tagged.append((country, r["year"], cat, ncs_of(r)))
    rows, totals = {}, {}
    for country, year, cat, ncs in tagged:
        for acc in (rows.setdefault((country, year, cat), [0, 0, 0.0]),
                    totals.setdefault((country, year), [0, 0, 0.0])):
            acc[0] += 1
            if ncs is not None: acc[1] += 1; acc[2] += ncs
    def mean(a): return (a[2] / a[1]) if a[1] else None
    csv = ["country,year,category,p,mncs"]
    for (country, year, cat), acc in sorted(rows.items()):
        csv.append("%s,%d,%s,%d,%s" % (country, year, cat, acc[0],
                                       "" if mean(acc) is None else "%.6f" % mean(acc)))
    plot = {k: {} for k in ("output_by_country", "impact_by_country",
                            "output_by_country_category", "impact_by_country_category",
                            "category_shares")}
    for (country, year), acc in totals.items():
        plot["output_by_country"].setdefault(country, {})[str(year)] = acc[0]
        plot["impact_by_country"].setdefault(country, {})[str(year)] = mean(acc)
    for (country, year, cat), acc in rows.items():
        for key, v in (("output_by_country_category", acc[0]),
                       ("impact_by_country_category", mean(acc))):
            plot[key].setdefault(country, {}).setdefault(cat, {})[str(year)] = v
        plot["category_shares"].setdefault(country, {}).setdefault(str(year), {})[cat] = \
            acc[0] / totals[(country, year)][0]

    manifest = {"version": VERSION, "config": {
        "corpus": cfg["corpus"], "reference_corpus": cfg["reference_corpus"],
        "lexicon": cfg["lexicon"], "funders": cfg["funders"],
        "category_whitelist": cfg.get("category_whitelist"),
        "period": {"start": period["start"], "end": period["end"]},
        "focal_countries": focal, "census_year": cfg.get("census_year"),
        "matcher": cfg.get("matcher", {"case_fold": True, "diacritic_fold": True}),
        "match_policy": cfg.get("match_policy", "preferred_only"),
        "embo_as_european": cfg["embo_as_european"],
        "alias_token_subset": cfg["alias_token_subset"],
        "normalization": cfg["normalization"],
        "ambiguity": {"min_term_length": 4, "acronym_rule": True, "acronym_max_length": 5,
                      "common_words": "builtin"}, "doc_types": cfg["doc_types"]},
        "counts": {"loaded": len(corpus), "filtered": len(analyzed), "matched": len(matched),
                   "classified": len(class_lines), "reference_loaded": len(world)}}
    os.makedirs(out_dir, exist_ok=True)
    for name, content in (("matched.jsonl", "".join(l + "\n" for l in matched_lines)),
                          ("classification.jsonl", "".join(l + "\n" for l in class_lines)),
                          ("indicators.csv", "".join(l + "\n" for l in csv)),
                          ("plot_data.json", emit(plot) + "\n"),
                          ("manifest.json", jdump(manifest) + "\n")):
        open(os.path.join(out_dir, name), "w", encoding="utf-8").write(content)
    print("matched=%d classified=%d rows=%d" % (len(matched), len(class_lines), len(rows)))

if __name__ == "__main__":
    main()
