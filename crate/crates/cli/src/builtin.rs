//! Scenario files compiled into the binary.

macro_rules! embed {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".toml")))),*]
    };
}

pub const SCENARIOS: &[(&str, &str)] = embed![
    "table2-1", "table2-2", "table2-3", "table2-4", "table2-5", "table2-6", "table2-7", "table2-8", "table2-9",
    "table3-1", "table3-2", "table3-3", "table3-4", "table3-5", "table3-6", "table3-7", "table3-8", "table3-9",
    "fig2", "fig3", "fig5a", "fig5b", "fig5c", "fig5d", "fig6a", "fig6b",
];

/// Prefix selecting an embedded scenario instead of a file.
pub const PREFIX: &str = "builtin:";

pub fn get(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Embedded scenario that is known to parse.
pub fn scenario(name: &str) -> d2dsec::scenario::Scenario {
    let text = get(name).unwrap_or_else(|| panic!("no embedded scenario `{name}`"));
    d2dsec::scenario::Scenario::parse(text).unwrap_or_else(|e| panic!("embedded scenario `{name}`: {e}"))
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_embedded_scenario_parses() {
        for (name, _) in super::SCENARIOS {
            super::scenario(name);
        }
    }
}
