"""Counterfactual exploration: environments, refutation, and replan checks.

Builds the rover scenario graph and then interrogates it the way an analyst
would: which assumptions does the goal rest on, what happens if we refute a
source, an agent, or a whole operation class, and when does the plan need
revision.

Run: python3 demos/what_if_analysis.py
"""

from planprov import all_plans, build_catalog, compute_labels, plan_to_prov
from planprov.dynamics import Overlay, propagate_confidence, support_fixpoint
from planprov.environments import contract, is_necessary, necessary_assumptions
from planprov.explain import replan_assessment, sensitivity
from planprov.scenarios import rover_appraisals, rover_domain, rover_problem

domain = rover_domain()
problem = rover_problem()
plans = all_plans(domain, problem, limit=10)
graph, report = plan_to_prov(plans, problem, rover_appraisals())
goal = report.goal_entities[0]

# Every node gets a label: the minimal sets of root assumptions sufficient
# to derive it. The goal has two, one per plan, and they are disjoint.
labels = compute_labels(graph)
print("environments of the goal:")
for env in sorted(labels[goal].environments, key=sorted):
    print("  ", sorted(env))
print("assumptions common to all paths:", sorted(necessary_assumptions(labels, goal)))

# Contraction answers necessity without touching the graph: drop every
# environment that intersects the refuted set and see what survives.
survivors = contract(labels[goal], {"TerrainMap"})
print("\nafter refuting TerrainMap,", len(survivors.environments), "environment(s) survive")
print("are both agents jointly necessary?", is_necessary(labels, goal, {"rover0", "flier1"}))

# The support fixpoint shows the downstream effect of a refutation.
overlay = Overlay(refuted=frozenset({"TerrainMap"}))
status = support_fixpoint(graph, overlay)
dead = sorted(n for n, s in status.items() if s == "OUT")
print(f"\nrefuting TerrainMap knocks out {len(dead)} nodes:")
for n in dead:
    print("  ", graph.nodes[n].label)

# Class-level refutation: un-checking take_image in the catalog kills both
# avenues to the goal.
catalog = build_catalog(graph)
take_image = catalog.operation_classes["take_image"]
status = support_fixpoint(graph, Overlay(refuted=take_image))
print("\nrefute the take_image class -> goal:", status[goal])

# Sensitivity and replan questions, as the query API answers them.
print("\nsensitivity of the goal to the flier:")
print("  ", sensitivity(graph, labels, goal, {"flier1"}).to_dict())

for refuted, label in [({"TerrainMap"}, "TerrainMap"), ({"flier1"}, "flier1")]:
    overlay = Overlay(refuted=frozenset(refuted))
    verdict = replan_assessment(graph, overlay, goal, threshold=0.5)
    conf = propagate_confidence(graph, overlay).get(goal)
    print(
        f"refute {label}: goal confidence {conf}, "
        f"needs replan at threshold 0.5 -> {verdict.verdicts['needs_replan']}"
    )
