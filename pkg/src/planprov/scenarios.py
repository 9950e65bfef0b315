"""Built-in demonstration scenarios.

``rover_*`` is the flagship two-agent imagery scenario: a land rover and an
aerial flier can each acquire a high-resolution image of objective1, with the
ground route depending on a terrain map and the air route on an elevation
map. ``delivery_*`` is a small logistics domain (drive/load/unload with a
recursive goto task) used for planner exercises.

Everything is returned as plain JSON-level dicts so the same definitions feed
the library API, the CLI, and the HTTP service.
"""

from __future__ import annotations

from .htn import Domain, Problem
from .model import Appraisal

TERRAIN_MAP = "TerrainMap"
ELEVATION_MAP = "ElevationMap"


def rover_domain_dict() -> dict:
    return {
        "operators": [
            {
                "name": "navigate",
                "parameters": ["?a", "?to"],
                "preconditions": ["at(?a,?from)", "can_traverse(?a,?from,?to)"],
                "add": ["at(?a,?to)"],
                "delete": ["at(?a,?from)"],
            },
            {
                "name": "take_image",
                "parameters": ["?a", "?obj", "?wp", "?res"],
                "preconditions": ["at(?a,?wp)", "visible(?obj,?wp)"],
                "add": ["image_taken(?a,?obj,?res)"],
                "delete": [],
            },
            {
                "name": "communicate",
                "parameters": ["?a", "?obj", "?res"],
                "preconditions": ["image_taken(?a,?obj,?res)"],
                "add": ["have_image(?obj,?res)"],
                "delete": [],
            },
        ],
        "methods": [
            {
                "id": "m-acquire-image",
                "task": "acquire_image(?obj,?res)",
                "preconditions": ["unit(?a)", "visible(?obj,?wp)"],
                "subtasks": [
                    "navigate(?a,?wp)",
                    "take_image(?a,?obj,?wp,?res)",
                    "communicate(?a,?obj,?res)",
                ],
            }
        ],
        "axioms": [
            {"id": "unit-ground", "head": "unit(?a)", "body": ["ground_unit(?a)"]},
            {"id": "unit-aerial", "head": "unit(?a)", "body": ["aerial_unit(?a)"]},
            {
                "id": "traverse-ground",
                "head": "can_traverse(?a,?x,?y)",
                "body": ["ground_unit(?a)", "traversable(?x,?y)"],
            },
            {
                "id": "traverse-aerial",
                "head": "can_traverse(?a,?x,?y)",
                "body": ["aerial_unit(?a)", "flyable(?x,?y)"],
            },
        ],
    }


def rover_problem_dict() -> dict:
    return {
        "state": [
            "at(rover0,start)",
            "at(flier1,base)",
            "ground_unit(rover0)",
            "aerial_unit(flier1)",
            {"literal": "traversable(start,waypoint1)", "source": TERRAIN_MAP},
            {"literal": "flyable(base,waypoint0)", "source": ELEVATION_MAP},
            {"literal": "visible(objective1,waypoint0)", "source": ELEVATION_MAP},
            {"literal": "visible(objective1,waypoint1)", "source": TERRAIN_MAP},
        ],
        "tasks": ["acquire_image(objective1,high_res)"],
        "goals": ["have_image(objective1,high_res)"],
        "sources": [
            {"id": TERRAIN_MAP, "label": "Terrain Map", "disciplines": ["GEOINT"]},
            {
                "id": ELEVATION_MAP,
                "label": "Elevation Map",
                "disciplines": ["GEOINT", "IMINT"],
            },
        ],
        "agents": ["rover0", "flier1"],
    }


def rover_appraisals_dicts() -> list[dict]:
    return [
        {
            "appraiser": "analyst",
            "subject": TERRAIN_MAP,
            "confidence": 0.20,
            "assumptions": ["the terrain survey is current"],
            "disciplines": ["GEOINT"],
        },
        {
            "appraiser": "analyst",
            "subject": ELEVATION_MAP,
            "confidence": 0.80,
            "assumptions": ["the elevation data is georegistered"],
            "disciplines": ["GEOINT"],
        },
    ]


def rover_domain() -> Domain:
    return Domain.from_dict(rover_domain_dict())


def rover_problem() -> Problem:
    return Problem.from_dict(rover_problem_dict())


def rover_appraisals() -> list[Appraisal]:
    return [Appraisal.from_dict(d) for d in rover_appraisals_dicts()]


def delivery_domain_dict() -> dict:
    return {
        "operators": [
            {
                "name": "drive",
                "parameters": ["?t", "?from", "?to"],
                "preconditions": ["at(?t,?from)", "road(?from,?to)"],
                "add": ["at(?t,?to)"],
                "delete": ["at(?t,?from)"],
            },
            {
                "name": "load",
                "parameters": ["?t", "?p", "?l"],
                "preconditions": ["at(?t,?l)", "pos(?p,?l)"],
                "add": ["in(?p,?t)"],
                "delete": ["pos(?p,?l)"],
            },
            {
                "name": "unload",
                "parameters": ["?t", "?p", "?l"],
                "preconditions": ["at(?t,?l)", "in(?p,?t)"],
                "add": ["pos(?p,?l)"],
                "delete": ["in(?p,?t)"],
            },
        ],
        "methods": [
            {
                "id": "m-deliver",
                "task": "deliver(?p,?to)",
                "preconditions": ["pos(?p,?from)", "truck(?t)"],
                "subtasks": [
                    "goto(?t,?from)",
                    "load(?t,?p,?from)",
                    "goto(?t,?to)",
                    "unload(?t,?p,?to)",
                ],
            },
            {
                "id": "m-goto-noop",
                "task": "goto(?t,?l)",
                "preconditions": ["at(?t,?l)"],
                "subtasks": [],
            },
            {
                "id": "m-goto-step",
                "task": "goto(?t,?l)",
                "preconditions": ["at(?t,?x)", "road(?x,?y)"],
                "subtasks": ["drive(?t,?x,?y)", "goto(?t,?l)"],
            },
        ],
        "axioms": [],
    }


def delivery_domain() -> Domain:
    return Domain.from_dict(delivery_domain_dict())


def delivery_problem_dict() -> dict:
    """One truck, one package, three locations in a one-way chain.

    Roads are directed and acyclic, so the recursive goto method terminates
    structurally rather than leaning on the planner's depth bound.
    """
    return {
        "state": [
            "at(truck0,depot)",
            "pos(pkg0,locA)",
            "truck(truck0)",
            "road(depot,locA)",
            "road(locA,locB)",
        ],
        "tasks": ["deliver(pkg0,locB)"],
        "goals": ["pos(pkg0,locB)"],
        "sources": [],
        "agents": ["truck0"],
    }


def delivery_problem() -> Problem:
    return Problem.from_dict(delivery_problem_dict())
