"""Regenerate the bundled fixtures: demo graph, benchmark set, mock script.

Run from the repository root:

    PYTHONPATH=src python3 scripts/gen_fixtures.py

The outputs are committed; this script exists so they stay reproducible.
"""

import json
import os
import re
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from graphtalk.store import PropertyGraph, save_graph

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "graphtalk", "data")

NODES = [
    ("Programming Basics", 100),
    ("Discrete Math", 100),
    ("Calculus", 100),
    ("Linear Algebra", 100),
    ("Data Structures", 200),
    ("Algorithms", 200),
    ("Probability", 200),
    ("Statistics", 200),
    ("Databases", 200),
    ("Operating Systems", 300),
    ("Machine Learning", 300),
    ("Deep Learning", 400),
    ("Neural Networks", 400),
    ("Computer Vision", 400),
    ("Natural Language Processing", 400),
]

EDGES = [
    ("Programming Basics", "PREREQUISITE_OF", "Data Structures"),
    ("Programming Basics", "PREREQUISITE_OF", "Databases"),
    ("Programming Basics", "PREREQUISITE_OF", "Operating Systems"),
    ("Data Structures", "PREREQUISITE_OF", "Algorithms"),
    ("Discrete Math", "PREREQUISITE_OF", "Algorithms"),
    ("Calculus", "PREREQUISITE_OF", "Probability"),
    ("Linear Algebra", "PREREQUISITE_OF", "Machine Learning"),
    ("Probability", "PREREQUISITE_OF", "Statistics"),
    ("Statistics", "PREREQUISITE_OF", "Machine Learning"),
    ("Algorithms", "PREREQUISITE_OF", "Machine Learning"),
    ("Machine Learning", "PREREQUISITE_OF", "Deep Learning"),
    ("Deep Learning", "PREREQUISITE_OF", "Computer Vision"),
    ("Deep Learning", "PREREQUISITE_OF", "Natural Language Processing"),
    ("Neural Networks", "SUBTOPIC_OF", "Deep Learning"),
    ("Computer Vision", "RELATED_TO", "Natural Language Processing"),
    ("Databases", "RELATED_TO", "Operating Systems"),
    ("Linear Algebra", "RELATED_TO", "Calculus"),
]

# (query, gold_task, concept surfaces, relation triples as (head_idx, REL, tail_idx))
RECORDS = [
    ("Is Programming Basics a prerequisite of Data Structures?", "RELATION_JUDGMENT", ["Programming Basics", "Data Structures"], []),
    ("Does Machine Learning lead directly to Deep Learning?", "RELATION_JUDGMENT", ["Machine Learning", "Deep Learning"], []),
    ("Is Calculus connected to Probability?", "RELATION_JUDGMENT", ["Calculus", "Probability"], []),
    ("Is there a direct link between Statistics and Machine Learning?", "RELATION_JUDGMENT", ["Statistics", "Machine Learning"], []),
    ("Does Deep Learning connect to Computer Vision?", "RELATION_JUDGMENT", ["Deep Learning", "Computer Vision"], []),
    ("Is Algorithms directly related to Machine Learning?", "RELATION_JUDGMENT", ["Algorithms", "Machine Learning"], []),
    ("Is Databases tied to Operating Systems?", "RELATION_JUDGMENT", ["Databases", "Operating Systems"], []),
    ("Is Calculus a direct prerequisite of Deep Learning?", "RELATION_JUDGMENT", ["Calculus", "Deep Learning"], []),
    ("Does Probability link straight to Neural Networks?", "RELATION_JUDGMENT", ["Probability", "Neural Networks"], []),
    ("Is Linear Algebra directly linked to Deep Learning?", "RELATION_JUDGMENT", ["Linear Algebra", "Deep Learning"], []),
    ("What should I learn before Machine Learning?", "PREREQUISITE_PREDICTION", ["Machine Learning"], []),
    ("What are the prerequisites of Deep Learning?", "PREREQUISITE_PREDICTION", ["Deep Learning"], []),
    ("Which topics come before Algorithms?", "PREREQUISITE_PREDICTION", ["Algorithms"], []),
    ("What must I master before Statistics?", "PREREQUISITE_PREDICTION", ["Statistics"], []),
    ("What leads up to Computer Vision?", "PREREQUISITE_PREDICTION", ["Computer Vision"], []),
    ("List everything required before Natural Language Processing.", "PREREQUISITE_PREDICTION", ["Natural Language Processing"], []),
    ("What do students need before Databases?", "PREREQUISITE_PREDICTION", ["Databases"], []),
    ("What background does Probability require?", "PREREQUISITE_PREDICTION", ["Probability"], []),
    ("Which courses precede Data Structures?", "PREREQUISITE_PREDICTION", ["Data Structures"], []),
    ("What is needed before Operating Systems?", "PREREQUISITE_PREDICTION", ["Operating Systems"], []),
    ("How do I get from Programming Basics to Deep Learning?", "PATH_SEARCHING", ["Programming Basics", "Deep Learning"], []),
    ("Show a path from Calculus to Machine Learning.", "PATH_SEARCHING", ["Calculus", "Machine Learning"], []),
    ("Find a route from Discrete Math to Computer Vision.", "PATH_SEARCHING", ["Discrete Math", "Computer Vision"], []),
    ("Is there a learning path from Linear Algebra to Natural Language Processing?", "PATH_SEARCHING", ["Linear Algebra", "Natural Language Processing"], []),
    ("Trace the steps from Data Structures to Deep Learning.", "PATH_SEARCHING", ["Data Structures", "Deep Learning"], []),
    ("How does one travel from Probability to Machine Learning?", "PATH_SEARCHING", ["Probability", "Machine Learning"], []),
    ("Find a way from Programming Basics to Computer Vision.", "PATH_SEARCHING", ["Programming Basics", "Computer Vision"], []),
    ("Show me the chain from Calculus to Statistics.", "PATH_SEARCHING", ["Calculus", "Statistics"], []),
    ("What path leads from Deep Learning to Programming Basics?", "PATH_SEARCHING", ["Deep Learning", "Programming Basics"], []),
    ("Map the journey from Statistics to Natural Language Processing.", "PATH_SEARCHING", ["Statistics", "Natural Language Processing"], []),
    ("Group all the concepts into clusters.", "CONCEPT_CLUSTERING", [], []),
    ("Which communities exist in this graph?", "CONCEPT_CLUSTERING", [], []),
    ("Cluster the topics for me.", "CONCEPT_CLUSTERING", [], []),
    ("Partition the curriculum into related groups.", "CONCEPT_CLUSTERING", [], []),
    ("What clusters of concepts do you see?", "CONCEPT_CLUSTERING", [], []),
    ("Organize the graph into cohesive groups.", "CONCEPT_CLUSTERING", [], []),
    ("Show the macro structure of the topics.", "CONCEPT_CLUSTERING", [], []),
    ("Break the subjects into clusters.", "CONCEPT_CLUSTERING", [], []),
    ("What natural groupings exist here?", "CONCEPT_CLUSTERING", [], []),
    ("Divide the concepts into communities.", "CONCEPT_CLUSTERING", [], []),
    ("What connections are missing between Databases and Operating Systems?", "SUBGRAPH_COMPLETION", ["Databases", "Operating Systems"], []),
    ("Suggest missing links among Calculus, Probability and Statistics.", "SUBGRAPH_COMPLETION", ["Calculus", "Probability", "Statistics"], []),
    ("Which edges should we add around Machine Learning and Deep Learning?", "SUBGRAPH_COMPLETION", ["Machine Learning", "Deep Learning"], []),
    ("What is missing between Computer Vision and Natural Language Processing?", "SUBGRAPH_COMPLETION", ["Computer Vision", "Natural Language Processing"], []),
    ("Propose new connections for the whole graph.", "SUBGRAPH_COMPLETION", [], []),
    ("Any missing relations among Linear Algebra, Calculus and Machine Learning?", "SUBGRAPH_COMPLETION", ["Linear Algebra", "Calculus", "Machine Learning"], []),
    ("Complete the subgraph around Data Structures and Algorithms.", "SUBGRAPH_COMPLETION", ["Data Structures", "Algorithms"], []),
    ("Which links should exist between Probability and Machine Learning?", "SUBGRAPH_COMPLETION", ["Probability", "Machine Learning"], []),
    ("Scan the graph for absent edges.", "SUBGRAPH_COMPLETION", [], []),
    ("Suggest what to connect among Neural Networks, Deep Learning and Machine Learning.", "SUBGRAPH_COMPLETION", ["Neural Networks", "Deep Learning", "Machine Learning"], []),
    ("Give me ideas around Deep Learning.", "IDEA_HAMSTER", ["Deep Learning"], []),
    ("Brainstorm starting from Machine Learning.", "IDEA_HAMSTER", ["Machine Learning"], []),
    ("What could I build with Natural Language Processing?", "IDEA_HAMSTER", ["Natural Language Processing"], []),
    ("Spark some ideas about Databases.", "IDEA_HAMSTER", ["Databases"], []),
    ("Generate project inspiration around Computer Vision.", "IDEA_HAMSTER", ["Computer Vision"], []),
    ("What ideas grow out of Probability?", "IDEA_HAMSTER", ["Probability"], []),
    ("Help me ideate around Data Structures.", "IDEA_HAMSTER", ["Data Structures"], []),
    ("Riff on Neural Networks for me.", "IDEA_HAMSTER", ["Neural Networks"], []),
    ("What directions open up from Statistics?", "IDEA_HAMSTER", ["Statistics"], []),
    ("Kick around a few ideas near Operating Systems.", "IDEA_HAMSTER", ["Operating Systems"], []),
    ("What is stored in this graph?", "FREE_FORM", [], []),
    ("Tell me about the curriculum overall.", "FREE_FORM", [], []),
    ("How many concepts are there?", "FREE_FORM", [], []),
    ("Which topic has the most connections?", "FREE_FORM", [], []),
    ("Summarize the knowledge base.", "FREE_FORM", [], []),
    ("Note that Reinforcement Learning builds on Machine Learning.", "FREE_FORM", ["Reinforcement Learning", "Machine Learning"], [(1, "PREREQUISITE_OF", 0)]),
    ("Remember that Graph Theory is related to Discrete Math.", "FREE_FORM", ["Graph Theory", "Discrete Math"], [(0, "RELATED_TO", 1)]),
    ("Add that Transformers are a subtopic of Deep Learning.", "FREE_FORM", ["Transformers", "Deep Learning"], [(0, "SUBTOPIC_OF", 1)]),
    ("Record that Numerical Methods depends on Calculus.", "FREE_FORM", ["Numerical Methods", "Calculus"], [(1, "PREREQUISITE_OF", 0)]),
    ("Please remember that Convex Optimization supports Machine Learning.", "FREE_FORM", ["Convex Optimization", "Machine Learning"], [(0, "PREREQUISITE_OF", 1)]),
]


def build_graph() -> PropertyGraph:
    graph = PropertyGraph()
    ids = {}
    for name, level in NODES:
        ids[name] = graph.upsert_node(name, "Concept", {"level": level}).id
    for source, relation, target in EDGES:
        graph.upsert_edge(ids[source], relation, ids[target])
    return graph


def extraction_text(query: str, concepts, rels) -> str:
    if not concepts:
        return "NONE"
    lines = []
    for surface in concepts:
        start = query.find(surface)
        assert start >= 0, f"{surface!r} not found in {query!r}"
        assert query.isascii(), f"non-ascii query: {query!r}"
        lines.append(f"ENTITY: {surface}|{start}|{start + len(surface)}")
    for head_idx, relation, tail_idx in rels:
        lines.append(f"REL: {head_idx}|{relation}|{tail_idx}")
    return "\n".join(lines)


def build_script() -> dict:
    rules = [
        {
            "match": "OBSERVATION:",
            "response": "ACTION: FINISH I inspected the graph and summarized what it holds.",
        }
    ]
    for query, gold_task, _, _ in RECORDS:
        rules.append(
            {
                "match": "### TASK: classify-intent[\\s\\S]*" + re.escape(query),
                "response": gold_task,
                "regex": True,
            }
        )
    for query, _, concepts, rels in RECORDS:
        rules.append(
            {
                "match": "### TASK: extract-concepts[\\s\\S]*" + re.escape(query),
                "response": extraction_text(query, concepts, rels),
                "regex": True,
            }
        )
    rules.append(
        {
            "match": "### TASK: react-explore",
            "response": "ACTION: QUERY MATCH (c:Concept) RETURN c.name LIMIT 5",
        }
    )
    rules.append(
        {"match": "### TASK: reason", "response": "The evidence above matches the request."}
    )
    rules.append(
        {
            "match": "### TASK: respond",
            "response": "Based on the graph evidence, here is the answer to your request.",
        }
    )
    return {"rules": rules, "default": "OK"}


def main() -> None:
    os.makedirs(DATA_DIR, exist_ok=True)

    graph = build_graph()
    graph_path = os.path.join(DATA_DIR, "demo_graph.jsonl")
    save_graph(graph, graph_path)
    print(f"wrote {graph_path}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")

    dataset_path = os.path.join(DATA_DIR, "benchmark_fixture.jsonl")
    with open(dataset_path, "w", encoding="utf-8") as handle:
        for query, gold_task, concepts, _ in RECORDS:
            record = {"query": query, "gold_task": gold_task}
            if concepts:
                record["gold_concepts"] = concepts
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {dataset_path}: {len(RECORDS)} records")

    script_path = os.path.join(DATA_DIR, "mock_script.json")
    script = build_script()
    with open(script_path, "w", encoding="utf-8") as handle:
        json.dump(script, handle, ensure_ascii=False, indent=2)
        handle.write("\n")
    print(f"wrote {script_path}: {len(script['rules'])} rules")


if __name__ == "__main__":
    main()
