//! Scenario files.
//!
//! A scenario is a TOML document with `[topology]`, `[radio]` and `[scheme]`
//! tables. Positions are `[x, y]` in meters, powers in dBm and target rates
//! in Mbit/s; rates are normalized by the bandwidth on load.
//!
//! ```toml
//! name = "single pair"
//!
//! [topology]
//! base_station = [0.0, 0.0]
//! eavesdropper = [0.0, 100.0]
//! cues = [[100.0, 100.0]]
//! d2d_pairs = [{ tx = [100.0, 0.0], rx = [150.0, 0.0] }]
//!
//! [radio]
//! p_cue_dbm = 23.0
//!
//! [scheme]
//! p = 0.5
//! beta = 0.5
//! r_s = 0.1
//! r_t = 0.5
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{link_budget, rate_normalize, LinkBudget, RadioParams, SchemeConfig, Topology};

fn half() -> f64 {
    0.5
}

/// `[scheme]` as written in the file, rates in Mbit/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub p: f64,
    pub beta: f64,
    pub r_s: f64,
    pub r_t: f64,
    #[serde(default = "half")]
    pub w_c: f64,
    #[serde(default = "half")]
    pub w_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    /// Free-text provenance of the scenario.
    #[serde(default)]
    pub note: Option<String>,
    pub topology: Topology,
    #[serde(default)]
    pub radio: RadioParams,
    pub scheme: SchemeSpec,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_overrides(text, &[])
    }

    /// Parses `text` after applying `section.field = value` overrides, where
    /// each value is a TOML literal.
    pub fn parse_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let diag = |e: toml::de::Error| Error::Scenario(e.to_string());
        // Deserializing straight from the text keeps line/column spans.
        let scenario: Scenario = if overrides.is_empty() {
            toml::from_str(text).map_err(diag)?
        } else {
            let mut doc: toml::Table = text.parse().map_err(diag)?;
            for (key, value) in overrides {
                apply_override(&mut doc, key, value)?;
            }
            doc.try_into().map_err(diag)?
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        self.topology.validate()?;
        self.radio.validate()?;
        self.scheme_config().validate()
    }

    /// Scheme with rates normalized to bit/s/Hz.
    pub fn scheme_config(&self) -> SchemeConfig {
        let s = &self.scheme;
        SchemeConfig {
            p: s.p,
            beta: s.beta,
            r_s: rate_normalize(s.r_s, &self.radio),
            r_t: rate_normalize(s.r_t, &self.radio),
            w_c: s.w_c,
            w_d: s.w_d,
        }
    }

    pub fn link_budget(&self) -> Result<LinkBudget> {
        link_budget(&self.topology, &self.radio)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }
}

fn apply_override(doc: &mut toml::Table, key: &str, value: &str) -> Result<()> {
    let (section, field) = key
        .split_once('.')
        .ok_or_else(|| Error::invalid(key, "override key must look like section.field"))?;
    let parsed: toml::Table = format!("v = {value}")
        .parse()
        .map_err(|_| Error::invalid(key, format!("`{value}` is not a TOML value")))?;
    let v = parsed.get("v").cloned().expect("key just written");
    let table = doc
        .entry(section)
        .or_insert_with(|| toml::Value::Table(toml::Table::new()))
        .as_table_mut()
        .ok_or_else(|| Error::invalid(key, format!("`{section}` is not a table")))?;
    table.insert(field.to_string(), v);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
[topology]
base_station = [0.0, 0.0]
eavesdropper = [0.0, 100.0]
cues = [[100.0, 100.0]]
d2d_pairs = [{ tx = [100.0, 0.0], rx = [150.0, 0.0] }]
[radio]
bandwidth_mhz = 2.0
[scheme]
p = 0.5
beta = 0.5
r_s = 0.2
r_t = 1.0
"#;

    #[test]
    fn rates_are_normalized_and_radio_defaults_fill_in() {
        let s = Scenario::parse(BASE).unwrap();
        let c = s.scheme_config();
        assert_eq!(c.r_s, 0.1);
        assert_eq!(c.r_t, 0.5);
        assert_eq!(s.radio.alpha, 4.0);
        assert_eq!((c.w_c, c.w_d), (0.5, 0.5));
    }

    #[test]
    fn overrides_replace_fields() {
        let s = Scenario::parse_with_overrides(BASE, &[("scheme.p".into(), "0".into())]).unwrap();
        assert_eq!(s.scheme.p, 0.0);
    }

    #[test]
    fn unknown_override_field_is_rejected() {
        let err = Scenario::parse_with_overrides(BASE, &[("scheme.q".into(), "1".into())]).unwrap_err();
        assert!(err.to_string().contains('q'), "{err}");
    }

    #[test]
    fn malformed_rate_names_field_and_line() {
        let bad = BASE.replace("r_t = 1.0", "r_t = \"fast\"");
        let msg = Scenario::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("r_t") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn out_of_range_probability_names_field() {
        let bad = BASE.replace("p = 0.5", "p = 1.5");
        let err = Scenario::parse(&bad).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { ref field, .. } if field == "scheme.p"));
    }

    #[test]
    fn round_trips_through_toml() {
        let s = Scenario::parse(BASE).unwrap();
        assert_eq!(Scenario::parse(&s.to_toml()).unwrap(), s);
    }
}
