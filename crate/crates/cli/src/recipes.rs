/// Bundled experiment configs: name, exercised module, summary, JSON.
pub const RECIPES: &[(&str, &str, &str, &str)] = &[
    ("twist-turn-sweep", "stationary-analysis", "twist-and-turn sweep, chi = (1, 0, 0), Omega along J3", include_str!("../recipes/twist-turn-sweep.json")),
    ("middle-rotor-sweep", "stationary-analysis", "rotor on the middle axis, chi = (-10, 1, 0)", include_str!("../recipes/middle-rotor-sweep.json")),
    ("lmg-sweep-a", "stationary-analysis", "LMG sweep, chi = (4, 3, 2)", include_str!("../recipes/lmg-sweep-a.json")),
    ("lmg-sweep-b", "stationary-analysis", "LMG sweep, chi = (0.25, 1, 2)", include_str!("../recipes/lmg-sweep-b.json")),
    ("lmg-sweep-c", "stationary-analysis", "LMG sweep, chi = (1, 4, 2)", include_str!("../recipes/lmg-sweep-c.json")),
    ("lmg-spectrum-a", "quantum-lmg", "LMG spectrum, chi = (4, 3, 2), N = 40", include_str!("../recipes/lmg-spectrum-a.json")),
    ("lmg-spectrum-b", "quantum-lmg", "LMG spectrum, chi = (0.25, 1, 2), N = 40", include_str!("../recipes/lmg-spectrum-b.json")),
    ("lmg-spectrum-c", "quantum-lmg", "LMG spectrum, chi = (1, 4, 2), N = 40", include_str!("../recipes/lmg-spectrum-c.json")),
    ("tilted-sweep-a", "stationary-analysis", "generalized sweep, chi = (4, 3, 2), Omega 2:1:1", include_str!("../recipes/tilted-sweep-a.json")),
    ("tilted-sweep-b", "stationary-analysis", "generalized sweep, chi = (4, 3, 2), Omega 1:2:0", include_str!("../recipes/tilted-sweep-b.json")),
    ("tilted-sweep-c", "stationary-analysis", "generalized sweep, chi = (4, 3, 2), Omega 2:0:1", include_str!("../recipes/tilted-sweep-c.json")),
    ("tilted-spectrum-a", "quantum-lmg", "generalized spectrum, Omega 2:1:1, N = 40", include_str!("../recipes/tilted-spectrum-a.json")),
    ("tilted-spectrum-b", "quantum-lmg", "generalized spectrum, Omega 1:2:0, N = 40", include_str!("../recipes/tilted-spectrum-b.json")),
    ("tilted-spectrum-c", "quantum-lmg", "generalized spectrum, Omega 2:0:1, N = 40", include_str!("../recipes/tilted-spectrum-c.json")),
    ("density-singularities", "quantum-lmg", "level-density singularities, chi = (2, 0, -2), Omega = (0.5, 0.5, 0.5)", include_str!("../recipes/density-singularities.json")),
    ("reshaping-plate", "floquet", "reshaping protocol, I0 = 1, K3 = 1", include_str!("../recipes/reshaping-plate.json")),
];

pub fn find(name: &str) -> Option<&'static str> {
    RECIPES.iter().find(|r| r.0 == name).map(|r| r.3)
}
