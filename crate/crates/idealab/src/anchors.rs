//! Result labels carried by every check record.

pub const IDEAL: &str = "Def generated ideal";
pub const OBJECT_IDEAL: &str = "Def object ideal";
pub const ORTH_ANN: &str = "Thm orth-and-ann";
pub const ORTH_SUM: &str = "Cor orth-of-sum";
pub const ORTH_PROD: &str = "Cor orth-of-prod";
pub const CONDUCTOR: &str = "Thm cond-element";
pub const Z_P2: &str = "Ex Z(p2)";
pub const ITP: &str = "Def D:itp";
pub const SALCE: &str = "Thm T:SL";
pub const MIN_SL: &str = "Thm min-SL";
pub const ET: &str = "Thm ET";
pub const PRERADICAL: &str = "Thm preradical";
pub const PRERADICALS: &str = "Thm preradicals";
pub const RAD: &str = "Prop rad";
pub const WKC: &str = "Def D:wkc";
pub const WEAK_EXACT: &str = "Prop weak-comp";
pub const ENOUGH: &str = "Def enough";
pub const WEAK_PB: &str = "Prop weak-pb";
pub const DIAMOND: &str = "Prop weak-extension-ideal";
pub const SELFINJ: &str = "Baer criterion";
pub const STABLE: &str = "Def stable category";
pub const SHIFT: &str = "Def shift";
pub const EXT: &str = "Def D:ext";
pub const SPECIAL: &str = "Lemma special-in-F";
pub const TRANSFER: &str = "Thm bij-com-in-F";
pub const OBJECT_PAIR: &str = "Cor ob-cor-com";

/// Label for an axiom finding id.
pub fn for_axiom(id: &str) -> &'static str {
    match id {
        "pairhood" | "WE0" | "WE1" | "WE1op" => WKC,
        "enough-inflations" | "enough-deflations" => ENOUGH,
        _ => WEAK_EXACT,
    }
}
