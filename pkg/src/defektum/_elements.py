# Standard atomic weights (amu), IUPAC abridged values.
ATOMIC_MASSES = {
    "X": 0.0,
    "H": 1.008, "He": 4.0026, "Li": 6.94, "Be": 9.0122, "B": 10.81,
    "C": 12.011, "N": 14.007, "O": 15.999, "F": 18.998, "Ne": 20.180,
    "Na": 22.990, "Mg": 24.305, "Al": 26.982, "Si": 28.085, "P": 30.974,
    "S": 32.06, "Cl": 35.45, "Ar": 39.95, "K": 39.098, "Ca": 40.078,
    "Sc": 44.956, "Ti": 47.867, "V": 50.942, "Cr": 51.996, "Mn": 54.938,
    "Fe": 55.845, "Co": 58.933, "Ni": 58.693, "Cu": 63.546, "Zn": 65.38,
    "Ga": 69.723, "Ge": 72.630, "As": 74.922, "Se": 78.971, "Br": 79.904,
    "Kr": 83.798, "Rb": 85.468, "Sr": 87.62, "Y": 88.906, "Zr": 91.224,
    "Nb": 92.906, "Mo": 95.95, "Ru": 101.07, "Rh": 102.91, "Pd": 106.42,
    "Ag": 107.87, "Cd": 112.41, "In": 114.82, "Sn": 118.71, "Sb": 121.76,
    "Te": 127.60, "I": 126.90, "Xe": 131.29, "Cs": 132.91, "Ba": 137.33,
    "Hf": 178.49, "Ta": 180.95, "W": 183.84, "Pt": 195.08, "Au": 196.97,
    "Hg": 200.59, "Tl": 204.38, "Pb": 207.2, "Bi": 208.98,
}

# (symbol, mass number) -> isotopic mass (amu)
ISOTOPE_MASSES = {
    ("H", 1): 1.00782503, ("H", 2): 2.01410178,
    ("Li", 6): 6.01512289, ("Li", 7): 7.01600344,
    ("B", 10): 10.01293695, ("B", 11): 11.00930536,
    ("C", 12): 12.0, ("C", 13): 13.00335484,
    ("N", 14): 14.00307400, ("N", 15): 15.00010890,
    ("O", 16): 15.99491462, ("O", 17): 16.99913176, ("O", 18): 17.99915961,
    ("Na", 23): 22.98976928,
    ("Si", 28): 27.97692653, ("Si", 29): 28.97649466, ("Si", 30): 29.97377014,
    ("P", 31): 30.97376199,
    ("K", 39): 38.96370649, ("K", 41): 40.96182526,
    ("Ge", 70): 69.92424875, ("Ge", 73): 72.92345895, ("Ge", 74): 73.92117776,
}

# atomic numbers, for writing cube atom lines
ATOMIC_NUMBERS = {sym: z for z, sym in enumerate(
    ["X", "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg",
     "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn",
     "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr"])}
