#!/usr/bin/env python3
"""Regenerates the recorded HTTP fixtures used by the pipeline tests.

Output is deterministic; rerun after editing PAPERS and commit the JSON.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
KG = "http://kg.fixture"
CROSSREF = "http://crossref.fixture"
S2 = "http://s2.fixture"
PAGE_SIZE = 5

# (id, title, doi, abstract, where the abstract lives, contributions)
# where: crossref | s2 | title | missing | flaky
PAPERS = [
    ("R100", "Solid lipid nanoparticles for oral delivery", "10.1000/sln.1",
     "<jats:title>Abstract</jats:title><jats:p>We study solid lipid nanoparticles as carriers for oral drug delivery. "
     "Particles were produced by hot homogenization and tested in 2019 on 120 patients in North America. "
     "Encapsulation efficiency reached 85 %.</jats:p>", "crossref",
     {"R100c1": [("has research problem", "oral drug delivery"), ("Material", "solid lipid nanoparticles"),
                 ("Method", "hot homogenization"), ("Location", "North America"), ("Year", "2019"),
                 ("Number of participants", "120"), ("Data available", "yes")]}),
    ("R101", "Perovskite solar cells with improved stability", "10.1000/pv.2",
     "Perovskite solar cells suffer from poor stability. We introduce a thin-film encapsulation layer that "
     "extends lifetime to 1000 hours. Tested in Germany. Power conversion efficiency was 21.3 %.", "crossref",
     {"R101c1": [("has research problem", "poor stability"), ("Material", "thin-film encapsulation layer"),
                 ("Location", "Germany"), ("Lifetime", "1000 hours"), ("Efficiency", "21.3 %"),
                 ("Material", "NA")]}),
    ("R102", "Transistors based on graphene", "10.1000/gr.3",
     "Transistors made of graphene operate at 2.45 GHz. The GFET design is compared with silicon devices. "
     "See https://example.org/gfet for data.", "s2",
     {"R102c1": [("has research problem", "Transistors"), ("Material", "graphene"), ("device", "GFET"),
                 ("Frequency", "2.45 GHz"), ("Website", "https://example.org/gfet"), ("Material", "T")]}),
    ("R103", "Unsupervised and adaptive anomaly detection", None,
     "We propose an Unsupervised and Adaptive method for anomaly detection in sensor streams. "
     "The approach is robust and was evaluated on 12 datasets.", "title",
     {"R103c1": [("has research problem", "anomaly detection"), ("Approach", "Unsupervised and Adaptive"),
                 ("Property", "robust"), ("Number of datasets", "12"), ("Method", "method")]}),
    ("R104", "Hidden Markov models for speech", "10.1000/hmm.4",
     "A continuous HMM is trained for speech recognition. Word error rate improves when the model "
     "uses context dependent phones.", "flaky",
     {"R104c1": [("has research problem", "speech recognition"), ("HMM type", "continuous"),
                 ("Material", "context dependent phones"), ("Metric", "Word error rate")]}),
    ("R105", "A paper nobody indexed", "10.1000/none.5", None, "missing",
     {"R105c1": [("has research problem", "missing abstracts"), ("Material", "paper")]}),
    ("R106", "Deep learning for crop yield prediction", "10.1000/crop.6",
     "Crop yield prediction in Kenya benefits from deep learning. Convolutional networks outperform "
     "linear regression on satellite imagery from 2015 to 2020.", "crossref",
     {"R106c1": [("has research problem", "Crop yield prediction"), ("Location", "Kenya"),
                 ("Method", "Convolutional networks"), ("Baseline", "linear regression"),
                 ("Material", "satellite imagery"), ("Time period", "2015 to 2020")],
      "R106c2": [("Material", "satellite imagery"), ("Baseline", "any track")]}),
    ("R107", "Battery materials screening", "10.1000/bat.7",
     "High-throughput screening identifies lithium iron phosphate as a stable cathode. "
     "Capacity retention stays above 90 % after 500 cycles.", "crossref",
     {"R107c1": [("has research problem", "battery materials screening"), ("Material", "lithium iron phosphate"),
                 ("Cycles", "500 cycles"), ("Capacity retention", "90 %"), ("Property", "stable")]}),
    ("R108", "Question answering over scholarly knowledge", "10.1000/qa.8",
     "Question answering over scholarly knowledge graphs is hard. We fine-tune transformer models "
     "on SQuAD and evaluate them on ORKG data.", "s2",
     {"R108c1": [("has research problem", "Question answering"), ("Model", "transformer models"),
                 ("Dataset", "SQuAD"), ("Data source", "ORKG"), ("Material", "scholarly knowledge graphs")]}),
    ("R109", "Wastewater treatment with algae", "10.1000/algae.9",
     "Microalgae remove nitrogen from municipal wastewater in Spain. Removal efficiency was 78 % "
     "within 10 days.", "crossref",
     {"R109c1": [("has research problem", "wastewater treatment"), ("Material", "Microalgae"),
                 ("Location", "Spain"), ("Duration", "10 days"), ("Efficiency", "78 %"),
                 ("Material", "nitrogen")]}),
    ("R110", "Urban heat islands from satellite data", "10.1000/heat.10",
     "Urban heat islands were mapped in Tokyo using thermal infrared bands. Surface temperature "
     "differences reached 7 degrees.", "crossref",
     {"R110c1": [("has research problem", "Urban heat islands"), ("Location", "Tokyo"),
                 ("Material", "thermal infrared bands"), ("Difference", "7 degrees")]}),
    ("R111", "Protein folding with coevolution", "10.1000/fold.11",
     "Coevolution signals improve protein structure prediction. Contact maps are predicted with "
     "a residual network and folded by simulated annealing.", "crossref",
     {"R111c1": [("has research problem", "protein structure prediction"), ("Material", "Contact maps"),
                 ("Method", "simulated annealing"), ("Model", "residual network"),
                 ("Result", "Coevolution signals improve protein structure prediction")]}),
    ("R112", "Sentiment analysis of product reviews", "10.1000/sent.12",
     "Sentiment analysis of product reviews uses a lexicon of positive and negative terms. "
     "Accuracy was 0.87 on the test set.", "crossref",
     {"R112c1": [("has research problem", "Sentiment analysis"), ("Material", "product reviews"),
                 ("Accuracy", "0.87"), ("Resource", "lexicon")]}),
]


def statement(subject, predicate, obj):
    return {"subject": subject, "predicate": predicate, "object": obj}


def paper_node(pid, title):
    return {"id": pid, "label": title, "classes": ["Paper"]}


def build_kg():
    statements = []
    pred_ids = {}
    for pid, title, doi, _abstract, _where, contribs in PAPERS:
        pnode = paper_node(pid, title)
        if doi:
            statements.append(statement(pnode, {"id": "P26", "label": "has DOI"}, {"id": "L" + pid, "label": doi}))
        statements.append(statement(pnode, {"id": "P30", "label": "research field"},
                                    {"id": "R11", "label": "Science"}))
        for cid, triples in contribs.items():
            statements.append(statement(pnode, {"id": "P31", "label": "has contribution"},
                                        {"id": cid, "label": "Contribution", "classes": ["Contribution"]}))
            cnode = {"id": cid, "label": "Contribution", "classes": ["Contribution"]}
            for n, (pred, obj) in enumerate(triples):
                pred_id = pred_ids.setdefault(pred, "P%d" % (1000 + len(pred_ids)))
                statements.append(statement(cnode, {"id": pred_id, "label": pred},
                                            {"id": "%s_o%d" % (cid, n), "label": obj}))
    # A contribution with no paper link is dropped with a warning.
    statements.append(statement({"id": "R999c1", "label": "Contribution", "classes": ["Contribution"]},
                                {"id": "P1000", "label": "has research problem"},
                                {"id": "orphan", "label": "orphaned problem"}))
    random.Random(7).shuffle(statements)

    pages = [statements[i:i + PAGE_SIZE] for i in range(0, len(statements), PAGE_SIZE)]
    total = len(pages) + 1  # the final page is deliberately malformed
    fixture = {}
    for i, content in enumerate(pages):
        url = "%s/api/statements?page=%d&size=%d" % (KG, i, PAGE_SIZE)
        body = {"content": content, "totalPages": total, "last": False, "number": i}
        fixture[url] = {"status": 200, "body": body}
    bad = "%s/api/statements?page=%d&size=%d" % (KG, len(pages), PAGE_SIZE)
    fixture[bad] = {"status": 200, "body": "<html>gateway hiccup</html>"}
    # Page 1 fails transiently once before succeeding.
    first = "%s/api/statements?page=1&size=%d" % (KG, PAGE_SIZE)
    fixture[first] = [{"status": 503, "body": ""}, fixture[first]]
    return fixture


def encode(s):
    from urllib.parse import quote
    return quote(s, safe="-_.~")


def build_abstracts():
    fixture = {}
    for pid, title, doi, abstract, where, _ in PAPERS:
        cr_doi = "%s/works/%s" % (CROSSREF, "/".join(encode(p) for p in doi.split("/"))) if doi else None
        s2_doi = ("%s/graph/v1/paper/DOI:%s?fields=title,abstract" %
                  (S2, "/".join(encode(p) for p in doi.split("/")))) if doi else None
        if where == "crossref":
            fixture[cr_doi] = {"status": 200, "body": {"status": "ok", "message": {"DOI": doi, "abstract": abstract}}}
        elif where == "flaky":
            ok = {"status": 200, "body": {"status": "ok", "message": {"DOI": doi, "abstract": abstract}}}
            fixture[cr_doi] = [{"status": 503, "body": ""}, ok]
        elif where == "s2":
            fixture[cr_doi] = {"status": 200, "body": {"status": "ok", "message": {"DOI": doi}}}
            fixture[s2_doi] = {"status": 200, "body": {"paperId": "x" + pid, "title": title, "abstract": abstract}}
        elif where == "title":
            url = "%s/works?query.bibliographic=%s&rows=1" % (CROSSREF, encode(title))
            fixture[url] = {"status": 200, "body": {"status": "ok", "message": {
                "items": [{"title": [title], "abstract": abstract}]}}}
        # "missing": every route answers 404
    return fixture


def main():
    for name, data in (("kg_statements.json", build_kg()), ("abstract_services.json", build_abstracts())):
        (HERE / name).write_text(json.dumps(data, indent=1, sort_keys=True, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
