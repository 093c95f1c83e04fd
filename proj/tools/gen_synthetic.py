#!/usr/bin/env python3
"""Builds the bundled synthetic fixture under data/synthetic/.

Writes corpus.jsonl (the analyzed four-country snapshot), world.jsonl (its
reference superset), lexicon.csv, funders.csv, categories.txt and
config.json. Deterministic for a fixed seed; run from the repo root:

    python3 tools/gen_synthetic.py
"""

import json
import random
import os
import sys

SEED = 20160921
OUT = os.path.join(os.path.dirname(__file__), "..", "data", "synthetic")

FOCAL = ["FR", "GB", "NL", "ES"]
OTHER_COUNTRIES = ["DE", "US", "IT", "SE", "CH", "BE"]
YEARS = list(range(2009, 2016))

WHITELIST = [
    "GENETICS_HEREDITY", "ONCOLOGY", "HEMATOLOGY", "NEUROSCIENCES",
    "PEDIATRICS", "RESPIRATORY_SYSTEM", "IMMUNOLOGY", "ENDOCRINOLOGY",
    "RARE_METABOLIC", "ULTRARARE_STUDIES",
]
NON_WHITELIST = ["ECONOMICS", "APPLIED_PHYSICS", "SOCIOLOGY", "MATHEMATICS"]

LEXICON = [
    ("ORPHA:586", "cystic fibrosis", ["mucoviscidosis", "CF"]),
    ("ORPHA:673", "malaria", ["paludism"]),
    ("ORPHA:324", "fabry disease", ["anderson fabry disease", "alpha galactosidase deficiency"]),
    ("ORPHA:117", "behçet disease", ["adamantiades syndrome"]),
    ("ORPHA:355", "gaucher disease", ["glucocerebrosidase deficiency", "GD"]),
    ("ORPHA:399", "huntington disease", ["huntington chorea", "HD"]),
    ("ORPHA:646", "niemann-pick disease", ["sphingomyelinase deficiency"]),
    ("ORPHA:98896", "duchenne muscular dystrophy", ["DMD"]),
    ("ORPHA:550", "melas syndrome", ["mitochondrial encephalomyopathy with lactic acidosis"]),
    ("ORPHA:790", "retinoblastoma", []),
    ("ORPHA:821", "sotos syndrome", ["cerebral gigantism"]),
    ("ORPHA:774", "hereditary hemorrhagic telangiectasia", ["osler weber rendu syndrome"]),
    ("ORPHA:365", "pompe disease", ["acid maltase deficiency"]),
    ("ORPHA:905", "wilson disease", ["hepatolenticular degeneration"]),
    ("ORPHA:848", "thalassemia major", ["cooley anemia"]),
    ("ORPHA:232", "sickle cell anemia", ["drepanocytosis"]),
    ("ORPHA:2140", "gestational trophoblastic tumor", ["GET"]),
    ("ORPHA:399805", "spermatogenic failure", ["SPERM"]),
    ("SYN:0001", "quilvane syndrome", ["quilvane merone disease"]),
    ("SYN:0002", "torbel atrophy", []),
    ("SYN:0003", "melkavian fever", ["melkavia periodic fever"]),
    ("SYN:0004", "ostrander dysplasia", []),
    ("SYN:0005", "carlein myopathy", ["carlein weiss myopathy"]),
    ("SYN:0006", "velodane deficiency", []),
    ("SYN:0007", "kresmer encephalopathy", []),
    ("SYN:0008", "ralstone anemia", ["ralstone gunnar anemia"]),
    ("SYN:0009", "delvaux neuropathy", []),
    ("SYN:0010", "fenwick harmon syndrome", ["FHS"]),
]

# funder_id, canonical, aliases, country, org_type
FUNDERS = [
    ("F_MRC", "Medical Research Council", ["MRC"], "GB", "NationalAgency"),
    ("F_WT", "Wellcome Trust", ["The Wellcome Trust"], "GB", "Charity"),
    ("F_CRUK", "Cancer Research UK", ["CRUK"], "GB", "Charity"),
    ("F_NIHR", "National Institute for Health Research", ["NIHR"], "GB", "NationalAgency"),
    ("F_INSERM", "Institut National de la Sante et de la Recherche Medicale", ["INSERM"], "FR", "NationalAgency"),
    ("F_ANR", "Agence Nationale de la Recherche", ["ANR"], "FR", "NationalAgency"),
    ("F_AFM", "AFM Telethon", ["Association Francaise contre les Myopathies"], "FR", "Charity"),
    ("F_NWO", "Netherlands Organisation for Scientific Research", ["NWO"], "NL", "NationalAgency"),
    ("F_ZONMW", "ZonMw", ["Netherlands Organisation for Health Research and Development"], "NL", "NationalAgency"),
    ("F_DHF", "Dutch Heart Foundation", ["Hartstichting"], "NL", "Charity"),
    ("F_ISCIII", "Instituto de Salud Carlos III", ["ISCIII"], "ES", "NationalAgency"),
    ("F_MINECO", "Ministerio de Economia y Competitividad", ["MINECO"], "ES", "NationalAgency"),
    ("F_GENCAT", "Generalitat de Catalunya", ["AGAUR"], "ES", "RegionalPublic"),
    ("F_FP7", "Seventh Framework Programme", ["FP7", "European Commission FP7", "EC FP7"], "EU", "ECFrameworkProgram"),
    ("F_FP6", "Sixth Framework Programme", ["FP6"], "EU", "ECFrameworkProgram"),
    ("F_ERC", "European Research Council", ["ERC"], "EU", "ECFrameworkProgram"),
    ("F_EMBO", "European Molecular Biology Organization", ["EMBO"], "EU", "PanEuropeanNonEC"),
    ("F_ESF", "European Science Foundation", ["ESF"], "EU", "PanEuropeanNonEC"),
    ("F_NIH", "National Institutes of Health", ["NIH"], "US", "NationalAgency"),
    ("F_DFG", "Deutsche Forschungsgemeinschaft", ["DFG"], "DE", "NationalAgency"),
    ("F_SNSF", "Swiss National Science Foundation", ["SNSF"], "CH", "NationalAgency"),
    ("F_PFE", "Pfizer", ["Pfizer Inc"], "", "Company"),
    ("F_GSK", "GlaxoSmithKline", ["GSK"], "", "Company"),
    ("F_NOV", "Novartis", ["Novartis Pharma"], "", "Company"),
]

NATIONAL = {
    "GB": ["Medical Research Council", "Wellcome Trust", "Cancer Research UK", "NIHR"],
    "FR": ["INSERM", "Agence Nationale de la Recherche", "AFM Telethon"],
    "NL": ["NWO", "ZonMw", "Dutch Heart Foundation"],
    "ES": ["Instituto de Salud Carlos III", "MINECO", "Generalitat de Catalunya"],
}
EUROPEAN = ["FP7", "European Commission FP7", "FP6", "European Research Council"]
OTHER_ORGS = ["NIH", "DFG", "SNSF", "Pfizer", "GSK", "Novartis Pharma", "EMBO",
              "Anonymous Benefactor Trust", "Regional Hospital Endowment"]

WORDS = ("patients cohort analysis clinical outcomes treatment therapy expression protein "
         "mutation variant gene pathway longitudinal registry prevalence incidence screening "
         "diagnosis management follow study evidence trial randomized marker profile tissue "
         "model signalling receptor phenotype genotype population survey imaging biomarker "
         "response progression survival severity onset pediatric adult multicenter european "
         "national assessment surveillance").split()


def sentence(rng, n):
    return " ".join(rng.choice(WORDS) for _ in range(n))


def surface_variant(rng, term):
    roll = rng.random()
    if roll < 0.15:
        return term.upper()
    if roll < 0.35:
        return term.title()
    if roll < 0.45 and " " in term:
        return term.replace(" ", "-", 1)
    return term


def grant(rng):
    kinds = [
        lambda: "G%07d" % rng.randrange(10 ** 6, 10 ** 7),
        lambda: "MR/%c%05dX/%d" % (rng.choice("JKL"), rng.randrange(10 ** 4, 10 ** 5), rng.randrange(1, 3)),
        lambda: "ANR-%02d-%04d" % (rng.randrange(9, 16), rng.randrange(1000, 9999)),
        lambda: "%06d" % rng.randrange(10 ** 5, 10 ** 6),
    ]
    return rng.choice(kinds)()


def pick_category(rng, country):
    # loose echoes of the per-country funding mixes
    base = [("NonFunded", 0.24), ("National", 0.30), ("European", 0.10),
            ("NationalAndEuropean", 0.12), ("Other", 0.24)]
    tweak = {"FR": {"NonFunded": 0.34, "National": 0.24},
             "GB": {"National": 0.38, "NonFunded": 0.16},
             "NL": {"Other": 0.32, "NonFunded": 0.18},
             "ES": {"NationalAndEuropean": 0.18, "NonFunded": 0.28}}[country]
    weights = {k: tweak.get(k, v) for k, v in base}
    total = sum(weights.values())
    roll = rng.random() * total
    for k, v in weights.items():
        roll -= v
        if roll <= 0:
            return k
    return "Other"


def funding_for(rng, category, home):
    """Structured funder mentions realizing the intended category label."""
    orgs = []
    if category in ("National", "NationalAndEuropean"):
        for name in rng.sample(NATIONAL[home], rng.choice([1, 1, 2])):
            orgs.append(name)
    if category in ("European", "NationalAndEuropean"):
        orgs.append(rng.choice(EUROPEAN))
    if category == "Other":
        orgs = rng.sample(OTHER_ORGS, rng.choice([1, 1, 2]))
    if category == "National" and rng.random() < 0.2:
        orgs.append(rng.choice(["Pfizer", "GSK"]))  # extra company keeps it National
    mentions = []
    for org in orgs:
        grants = [grant(rng) for _ in range(rng.choice([0, 1, 1, 2]))]
        mentions.append({"org": org, "grants": grants})
    return mentions


def make_record(rng, rid, countries, matched, whitelisted, fa_as_text=False):
    year = rng.choice(YEARS)
    doc_type = "Review" if rng.random() < 0.15 else "Article"
    cats = rng.sample(WHITELIST[:9] if whitelisted else NON_WHITELIST, rng.choice([1, 1, 2]))

    title = sentence(rng, rng.randrange(4, 9))
    abstract = "" if rng.random() < 0.12 else sentence(rng, rng.randrange(25, 60))
    keywords = [sentence(rng, rng.randrange(1, 3)) for _ in range(rng.randrange(0, 4))]
    if matched:
        disease = rng.choice(LEXICON)[1]
        spot = rng.random()
        if spot < 0.55:
            title = title + " in " + surface_variant(rng, disease)
        elif spot < 0.85 and abstract:
            cut = rng.randrange(0, len(abstract))
            space = abstract.find(" ", cut)
            if space < 0:
                space = len(abstract)
            abstract = abstract[:space] + " " + surface_variant(rng, disease) + abstract[space:]
        else:
            keywords.append(surface_variant(rng, disease))
        if rng.random() < 0.25:  # second disease sometimes
            keywords.append(rng.choice(LEXICON)[1])

    home = rng.choice([c for c in countries if c in FOCAL]) if any(
        c in FOCAL for c in countries) else "GB"
    category = pick_category(rng, home) if any(c in FOCAL for c in countries) else "NonFunded"
    if category == "NonFunded" and year == 2015 and "ES" in countries:
        category = "National"  # keep (ES, 2015, NonFunded) free for the designed null cell

    lam = 2.2 + 0.35 * (year - 2009) + (sum(map(ord, cats[0])) % 3) * 0.8
    if category == "NonFunded":
        lam *= 0.55
    citations = sum(1 for _ in range(60) if rng.random() < lam / 60.0)

    record = {
        "id": rid,
        "title": title,
        "abstract": abstract,
        "keywords": keywords,
        "doc_type": doc_type,
        "year": year,
        "categories": sorted(set(cats)),
        "countries": sorted(set(countries)),
        "citations": citations,
        "funding": None,
    }
    if category != "NonFunded":
        mentions = funding_for(rng, category, home)
        if fa_as_text:
            parts = []
            for m in mentions:
                part = m["org"]
                if m["grants"]:
                    part += " (" + ", ".join(m["grants"]) + ")"
                parts.append(part)
            record["funding"] = []
            record["fa_text"] = "; ".join(parts)
        else:
            record["funding"] = mentions
    return record


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else SEED
    out = sys.argv[2] if len(sys.argv) > 2 else OUT
    rng = random.Random(seed)
    os.makedirs(out, exist_ok=True)

    corpus = []
    for i in range(1, 498):
        rid = "W%04d" % i
        countries = [rng.choice(FOCAL)]
        if rng.random() < 0.18:
            countries.append(rng.choice(FOCAL + OTHER_COUNTRIES))
        matched = rng.random() > 0.07
        whitelisted = rng.random() > 0.08
        fa_as_text = rng.random() < 0.04
        corpus.append(make_record(rng, rid, countries, matched, whitelisted, fa_as_text))

    # the designed undefined-score record: alone in its reference cell, which
    # has zero mean citations
    corpus.append({
        "id": "W0498", "title": "A case of Quilvane syndrome",
        "abstract": "Case description of quilvane syndrome with negative findings.",
        "keywords": ["case report"], "doc_type": "Review", "year": 2015,
        "categories": ["ULTRARARE_STUDIES"], "countries": ["ES"], "citations": 0,
        "funding": None,
    })
    # diacritic and hyphen variants exercised in the golden path
    corpus.append({
        "id": "W0499", "title": "Ocular involvement in Behçet disease",
        "abstract": "Prospective registry of BEHCET-DISEASE management.",
        "keywords": ["uveitis"], "doc_type": "Article", "year": 2013,
        "categories": ["IMMUNOLOGY"], "countries": ["FR", "GB"], "citations": 9,
        "funding": [{"org": "INSERM", "grants": ["ANR-11-0042"]},
                    {"org": "FP7", "grants": ["HEALTH-F2-2011-260793"]}],
    })
    corpus.append({
        "id": "W0500", "title": "Fabry-disease outcomes under enzyme therapy",
        "abstract": "Multicenter fabry disease cohort with renal endpoints.",
        "keywords": ["Fabry disease"], "doc_type": "Article", "year": 2014,
        "categories": ["RARE_METABOLIC", "GENETICS_HEREDITY"], "countries": ["NL"],
        "citations": 15,
        "funding": [], "fa_text": "ZonMw (016.146.789); EMBO",
    })

    world = list(corpus)
    for i in range(1, 1001):
        rid = "X%04d" % i
        if rng.random() < 0.7:
            countries = [rng.choice(OTHER_COUNTRIES)]
        else:
            countries = [rng.choice(FOCAL + OTHER_COUNTRIES), rng.choice(OTHER_COUNTRIES)]
        matched = rng.random() < 0.25
        whitelisted = rng.random() > 0.25
        world.append(make_record(rng, rid, countries, matched, whitelisted))
    # world companion for the designed zero-mean cell
    world.append({
        "id": "X1001", "title": "Commentary on quilvane syndrome registries",
        "abstract": "", "keywords": [], "doc_type": "Review", "year": 2015,
        "categories": ["ULTRARARE_STUDIES"], "countries": ["DE"], "citations": 0,
        "funding": None,
    })

    # keep every other reference cell strictly positive so the only
    # undefined score in the fixture is the designed one
    cells = {}
    for r in world:
        for cat in r["categories"]:
            key = (cat, r["year"], r["doc_type"])
            cells.setdefault(key, []).append(r)
    for key, members in sorted(cells.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        if key[0] == "ULTRARARE_STUDIES" and key[1] == 2015 and key[2] == "Review":
            continue
        if sum(m["citations"] for m in members) == 0:
            members[0]["citations"] = 1

    def dump_jsonl(path, records):
        with open(path, "w", encoding="utf-8") as f:
            f.write("#census_year=2016\n")
            for r in records:
                f.write(json.dumps(r, sort_keys=True, separators=(",", ":"),
                                   ensure_ascii=False) + "\n")

    dump_jsonl(os.path.join(out, "corpus.jsonl"), corpus)
    dump_jsonl(os.path.join(out, "world.jsonl"), world)

    with open(os.path.join(out, "lexicon.csv"), "w", encoding="utf-8") as f:
        f.write("disease_id,preferred_name,synonyms,ambiguous\n")
        for did, name, syns in LEXICON:
            f.write("%s,%s,%s,\n" % (did, name, "|".join(syns)))

    with open(os.path.join(out, "funders.csv"), "w", encoding="utf-8") as f:
        f.write("funder_id,canonical_name,aliases,country,org_type\n")
        for fid, name, aliases, country, org_type in FUNDERS:
            f.write("%s,%s,%s,%s,%s\n" % (fid, name, "|".join(aliases), country, org_type))

    with open(os.path.join(out, "categories.txt"), "w", encoding="utf-8") as f:
        f.write("# analyzed subject categories\n")
        for c in WHITELIST:
            f.write(c + "\n")

    config = {
        "corpus": "corpus.jsonl",
        "reference_corpus": "world.jsonl",
        "lexicon": "lexicon.csv",
        "funders": "funders.csv",
        "category_whitelist": "categories.txt",
        "output_dir": "out",
        "period": {"start": 2009, "end": 2015},
        "focal_countries": ["FR", "GB", "NL", "ES"],
        "census_year": 2016,
        "matcher": {"case_fold": True, "diacritic_fold": True},
        "match_policy": "preferred_only",
        "embo_as_european": False,
        "alias_token_subset": False,
        "normalization": {"by_doc_type": True, "variant": "mean_of_expected"},
        "doc_types": ["Article", "Review"],
        "workers": 1,
    }
    with open(os.path.join(out, "config.json"), "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2, sort_keys=True)
        f.write("\n")

    print("corpus records:", len(corpus), "world records:", len(world))


if __name__ == "__main__":
    main()
