//! Named configurations that regenerate each figure's data.

use crate::experiment::config::ExperimentConfig;
use crate::{Error, Result};

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        /// `(name, JSON text)` of every shipped preset.
        pub const PRESETS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../presets/", $name, ".json")))),*
        ];
    };
}

presets!(
    "fig1a",
    "fig1b",
    "fig2-standard",
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig5a",
    "fig5b",
    "fig6",
    "vg-decay",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let known: Vec<_> = names().collect();
            Error::config("preset", format!("unknown preset `{name}` (known: {})", known.join(", ")))
        })
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_json(preset_text(name)?)
        .map_err(|e| Error::config(format!("preset {name}"), e.to_string()))
}
