//! Prints the Hodge diamond of every bundled model.

use lgmodel::models;
use lgmodel::statespace::hodge_diamond_text;
use lgmodel::suite::Computed;

fn main() {
    for (name, text) in [
        ("lt_j", models::LT_J),
        ("lt_sl", models::LT_SL),
        ("lt_generic_j", models::LT_GENERIC_J),
        ("lt_generic_sl", models::LT_GENERIC_SL),
        ("quintic_j", models::QUINTIC_J),
        ("quintic_sl", models::QUINTIC_SL),
    ] {
        match Computed::from_text(name, text) {
            Ok(c) => println!(
                "{name} / {}\n{}",
                c.group.name,
                hodge_diamond_text(&c.space.hodge_grid())
            ),
            Err(e) => eprintln!("{name}: {e}"),
        }
    }
}
