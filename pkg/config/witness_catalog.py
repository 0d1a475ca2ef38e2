"""
Catalog of Published Four-Qubit Criteria
Hand-transcribed individual (per-cut) criteria, combined witnesses, measured
correlations and reported witness values for the GHZ, cluster, Dicke, singlet
and W states.

Per-cut criteria are stored as two classes of Pauli indices whose members
mutually cut-anticommute; the criterion value is
    1/2 [ mean_{class_a} T_j^2 + mean_{class_b} T_j^2 ] <= 1/2
("averaged" entries use the single mean over class_a instead).
"""

WITNESS_CATALOG = {
    # === GHZ ===
    "ghz4": {
        "name": "Four-qubit GHZ",
        "state": "ghz",
        "settings": ["3333", "1221"],
        "combined": {
            "weights": {"0033": 1, "0303": 1, "0330": 1, "3003": 1,
                        "3030": 1, "3300": 1, "3333": 1, "1221": 4},
            "g": "7",
            "g0": "11",
        },
        "criteria": [
            {"cut": "A|BCD", "class_a": ["3030", "3003", "3300", "3333"], "class_b": ["1221"]},
            {"cut": "B|ACD", "class_a": ["0330", "0303", "3300", "3333"], "class_b": ["1221"]},
            {"cut": "C|ABD", "class_a": ["3030", "0330", "0033", "3333"], "class_b": ["1221"]},
            {"cut": "D|ABC", "class_a": ["3003", "0303", "0033", "3333"], "class_b": ["1221"]},
            {"cut": "AB|CD", "class_a": ["3030", "3003", "0330", "0303"], "class_b": ["1221"]},
            {"cut": "AC|BD", "class_a": ["3300", "0033", "3003", "0330"], "class_b": ["1221"]},
            {"cut": "AD|BC", "class_a": ["3300", "0033", "3030", "0303"], "class_b": ["1221"]},
        ],
    },

    # === Cluster ===
    "cluster4": {
        "name": "Four-qubit cluster",
        "state": "cluster4",
        "settings": ["1133", "3311"],
        "combined": {
            "weights": {"0033": 1, "1103": 1, "1130": 1, "0311": 1, "3011": 1, "3300": 1},
            "g": "4",
            "g0": "6",
        },
        "criteria": [
            {"cut": "A|BCD", "class_a": ["1103", "1130"], "class_b": ["3011", "3300"]},
            {"cut": "B|ACD", "class_a": ["1103", "1130"], "class_b": ["0311", "3300"]},
            {"cut": "C|ABD", "class_a": ["0033", "1130"], "class_b": ["0311", "3011"]},
            {"cut": "D|ABC", "class_a": ["0033", "1103"], "class_b": ["0311", "3011"]},
            {"cut": "AB|CD", "class_a": ["1103", "1130"], "class_b": ["0311", "3011"]},
            {"cut": "AC|BD", "kind": "averaged",
             "class_a": ["0033", "0311", "1103", "1130", "3011", "3300"], "class_b": []},
            {"cut": "AD|BC", "kind": "averaged",
             "class_a": ["0033", "0311", "1103", "1130", "3011", "3300"], "class_b": []},
        ],
    },

    # === Dicke (two excitations) ===
    "dicke42": {
        "name": "Four-qubit Dicke, two excitations",
        "state": "dicke",
        "excitations": 2,
        "settings": ["1111", "2222"],
        "combined": {
            "weights": {"1111": 2, "2222": 2,
                        "1100": 1, "0011": 1, "0101": 1, "1010": 1, "1001": 1, "0110": 1,
                        "2200": 1, "0022": 1, "0202": 1, "2020": 1, "2002": 1, "0220": 1},
            "g": "8",
            "g0": "10",
        },
        "criteria": [
            {"cut": "A|BCD", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "B|ACD", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "C|ABD", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "D|ABC", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "AB|CD", "class_a": ["1010", "1001", "0110", "0101"], "class_b": ["2222"]},
            {"cut": "AC|BD", "class_a": ["1100", "1001", "0110", "0011"], "class_b": ["2222"]},
            {"cut": "AD|BC", "class_a": ["1100", "1010", "0101", "0011"], "class_b": ["2222"]},
        ],
    },

    # === Singlet ===
    "singlet4": {
        "name": "Four-qubit singlet",
        "state": "singlet4",
        "settings": ["1111", "2222", "3333"],
        "combined": {
            "weights": {"1111": 4, "3333": 2, "3003": 1, "0330": 1, "3030": 1, "0303": 1},
            "g": "6",
            "g0": "10",
        },
        "criteria": [
            {"cut": "A|BCD", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "B|ACD", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "C|ABD", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "D|ABC", "class_a": ["1111"], "class_b": ["2222"]},
            {"cut": "AB|CD", "class_a": ["1010", "1001", "0110", "0101"], "class_b": ["2222"]},
            {"cut": "AC|BD", "class_a": ["1001", "0110"], "class_b": ["2222"]},
            {"cut": "AD|BC", "class_a": ["1010", "0101"], "class_b": ["2222"]},
        ],
    },

    # === W (per-cut only, correlations too weak for a combined witness) ===
    "w4": {
        "name": "Four-qubit W",
        "state": "w",
        "settings": ["3333", "1111"],
        "combined": None,
        "criteria": [
            {"cut": "A|BCD", "class_a": ["3333"], "class_b": ["1001", "1010", "1100"]},
            {"cut": "B|ACD", "class_a": ["3333"], "class_b": ["0101", "0110", "1100"]},
            {"cut": "C|ABD", "class_a": ["3333"], "class_b": ["0011", "0110", "1010"]},
            {"cut": "D|ABC", "class_a": ["3333"], "class_b": ["0011", "0101", "1001"]},
            {"cut": "AB|CD", "class_a": ["3333"], "class_b": ["0101", "0110", "1001", "1010"]},
            {"cut": "AC|BD", "class_a": ["3333"], "class_b": ["0011", "0110", "1001", "1100"]},
            {"cut": "AD|BC", "class_a": ["3333"], "class_b": ["0011", "0101", "1010", "1100"]},
        ],
    },
}

# Measured correlations (value, stderr) of the two-setting experiments
MEASURED_CORRELATIONS = {
    "ghz4": {
        "3333": (0.982, 0.003),
        "3300": (0.993, 0.002),
        "0033": (0.988, 0.002),
        "3003": (0.963, 0.004),
        "0330": (0.969, 0.004),
        "3030": (0.972, 0.004),
        "0303": (0.960, 0.005),
        "1221": (-0.925, 0.006),
    },
    "cluster4": {
        "3300": (0.987, 0.002),
        "3011": (0.986, 0.003),
        "0311": (0.974, 0.003),
        "1130": (-0.945, 0.006),
        "1103": (-0.934, 0.006),
        "0033": (0.989, 0.002),
    },
}

# Reported witness values (value, stderr)
REPORTED_VALUES = {
    "ghz4": {
        "A|BCD": (0.894, 0.007), "B|ACD": (0.906, 0.006), "C|ABD": (0.906, 0.006),
        "D|ABC": (0.906, 0.006), "AB|CD": (0.904, 0.006), "AC|BD": (0.906, 0.006),
        "AD|BC": (0.901, 0.006), "combined": (0.916, 0.005),
    },
    "cluster4": {
        "A|BCD": (0.922, 0.006), "B|ACD": (0.940, 0.004), "C|ABD": (0.940, 0.004),
        "D|ABC": (0.928, 0.006), "AB|CD": (0.922, 0.006), "AC|BD": (0.948, 0.004),
        "AD|BC": (0.943, 0.004), "combined": (0.940, 0.004),
    },
    "dicke42": {
        "A|BCD": (0.819, 0.013), "B|ACD": (0.819, 0.013), "C|ABD": (0.819, 0.013),
        "D|ABC": (0.819, 0.013), "AB|CD": (0.627, 0.013), "AC|BD": (0.620, 0.013),
        "AD|BC": (0.625, 0.013), "combined": (0.801, 0.017),
    },
    "singlet4": {
        "A|BCD": (0.804, 0.019), "B|ACD": (0.804, 0.019), "C|ABD": (0.804, 0.019),
        "D|ABC": (0.804, 0.019), "AB|CD": (0.608, 0.017), "AC|BD": (0.594, 0.021),
        "AD|BC": (0.622, 0.021), "combined": (0.683, 0.014),
    },
}

# θ-sweep at φ = π: (theta as multiple of π/48, fidelity, W_GHZ, W_C4), each (value, stderr)
SWEEP_RESULTS = [
    (0, (0.958, 0.004), (0.916, 0.005), (0.333, 0.002)),
    (1, (0.959, 0.004), (0.894, 0.006), (0.387, 0.005)),
    (2, (0.958, 0.004), (0.828, 0.007), (0.509, 0.007)),
    (3, (0.965, 0.003), (0.740, 0.007), (0.685, 0.007)),
    (4, (0.963, 0.003), (0.644, 0.006), (0.835, 0.006)),
    (5, (0.963, 0.003), (0.603, 0.004), (0.918, 0.005)),
    (6, (0.962, 0.003), (0.590, 0.004), (0.940, 0.004)),
    (7, (0.959, 0.004), (0.608, 0.006), (0.886, 0.007)),
    (8, (0.959, 0.004), (0.679, 0.008), (0.761, 0.008)),
    (9, (0.958, 0.003), (0.746, 0.007), (0.640, 0.008)),
    (10, (0.960, 0.004), (0.820, 0.007), (0.497, 0.007)),
    (11, (0.963, 0.004), (0.890, 0.006), (0.375, 0.004)),
    (12, (0.967, 0.004), (0.927, 0.005), (0.330, 0.002)),
]
