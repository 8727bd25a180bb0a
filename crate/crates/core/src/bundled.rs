//! Example models shipped with the crate.

use crate::model::{parse_model, Mdp};

pub const NAMES: [&str; 5] = ["fig2", "fig3", "ladder", "rare_coin", "mec_rooms"];

/// Source text of a bundled model.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => include_str!("../../../models/fig2.json"),
        "fig3" => include_str!("../../../models/fig3.json"),
        "ladder" => include_str!("../../../models/ladder.json"),
        "rare_coin" => include_str!("../../../models/rare_coin.json"),
        "mec_rooms" => include_str!("../../../models/mec_rooms.json"),
        _ => return None,
    })
}

pub fn load(name: &str) -> Option<Mdp> {
    source(name).map(|text| parse_model(text).expect("bundled models are valid"))
}
