//! Input files shipped with the crate, embedded at compile time.

macro_rules! fixture_table {
    ($prefix:literal; $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $prefix, "_", $name, ".json")))),*]
    };
}

/// Crystal specs by name.
pub const CRYSTALS: &[(&str, &str)] = fixture_table!(
    "crystal";
    "coxeter_333", "p1", "p2", "pm", "pg", "p3", "p4", "p6", "sheared_b2", "order3_3d", "glide_3d",
);

/// Word metric specs by name.
pub const METRICS: &[(&str, &str)] = fixture_table!("metric"; "l1", "diagonal", "dim1", "dinf");

/// Lie algebras by name.
pub const LIE_ALGEBRAS: &[(&str, &str)] =
    fixture_table!("lie"; "abelian2", "heisenberg", "filiform4", "sl2");

/// Pushout inputs by name.
pub const PUSHOUTS: &[(&str, &str)] =
    fixture_table!("pushout"; "z2_identity", "z4_doubling", "s3_alternating");

/// Scaled ball-family instances by name.
pub const SCALED: &[(&str, &str)] = fixture_table!("scaled"; "grid", "c4");

pub fn lookup(table: &[(&'static str, &'static str)], name: &str) -> Option<&'static str> {
    table.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
