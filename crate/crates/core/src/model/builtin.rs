//! Built-in models. Hand-written ones ship as `.game` files; Nim and
//! Lehmann-Rabin are generated because their relations enumerate many letters.

use super::{parse_model, GameInstance, ModelError};

pub const BUILTIN_NAMES: &[&str] = &["flip", "israeli-jalfon", "herman-line", "lehmann-rabin", "take-away", "nim"];

/// Source text of a built-in model.
pub fn builtin_source(name: &str) -> Option<String> {
    Some(match name {
        "flip" => include_str!("../../models/flip.game").to_string(),
        "israeli-jalfon" => include_str!("../../models/israeli-jalfon.game").to_string(),
        "herman-line" => include_str!("../../models/herman-line.game").to_string(),
        "take-away" => include_str!("../../models/take-away.game").to_string(),
        "nim" => nim_source(),
        "lehmann-rabin" => lehmann_rabin_source(),
        _ => return None,
    })
}

pub fn builtin(name: &str) -> Result<GameInstance, ModelError> {
    let src = builtin_source(name).ok_or_else(|| ModelError::UnknownBuiltin(name.to_string()))?;
    parse_model(name, &src)
}

/// `true` for the combinatorial games that need the game profile.
pub fn is_game(name: &str) -> bool {
    matches!(name, "take-away" | "nim")
}

fn column(bits: [u8; 3]) -> String {
    bits.iter().map(|b| b.to_string()).collect()
}

fn columns() -> impl Iterator<Item = [u8; 3]> {
    (0..8u8).map(|c| [c >> 2 & 1, c >> 1 & 1, c & 1])
}

/// Three-pile Nim with piles written in binary.
///
/// A position is a turn letter followed by bit columns, most significant
/// first; column `xyz` carries one bit of each pile.
pub fn nim_source() -> String {
    let mut s = String::new();
    s.push_str(
        "# Three-pile Nim.\n\
         #\n\
         # A position is  turn column*  where the turn letter is a when Player 1\n\
         # moves next and b when Player 2 does, and each column xyz holds one bit\n\
         # of piles 1, 2 and 3, most significant column first. A move lowers one\n\
         # pile: equal bits, then a 1 that becomes 0, then arbitrary bits, while\n\
         # the other piles keep their bits.\n\
         #\n\
         # Player 2 wins from the positions whose pile sizes xor to zero, that is,\n\
         # every column has an even number of ones.\n\n",
    );
    let cols: Vec<String> = columns().map(column).collect();
    s.push_str(&format!("alphabet: a, b, {};\n\n", cols.join(", ")));
    let even: Vec<String> = columns().filter(|c| c.iter().sum::<u8>() % 2 == 0).map(column).collect();
    s.push_str(&format!("initial: a ({})*;\n", even.join(" | ")));
    s.push_str("final:   a 000*;\n\n");
    let same: Vec<String> = cols.iter().map(|c| format!("{c}/{c}")).collect();
    let same = format!("({})*", same.join(" | "));
    let mut moves = Vec::new();
    for pile in 0..3 {
        let mut drop = Vec::new();
        let mut free = Vec::new();
        for x in columns() {
            for y in columns() {
                let others_equal = (0..3).all(|i| i == pile || x[i] == y[i]);
                if !others_equal {
                    continue;
                }
                free.push(format!("{}/{}", column(x), column(y)));
                if x[pile] == 1 && y[pile] == 0 {
                    drop.push(format!("{}/{}", column(x), column(y)));
                }
            }
        }
        moves.push(format!("{same} ({}) ({})*", drop.join(" | "), free.join(" | ")));
    }
    let body: Vec<String> = moves.iter().map(|m| format!("    {m}")).collect();
    s.push_str(&format!("player1: a/b (\n{}\n  );\n", body.join("\n  |\n")));
    s.push_str(&format!("player2: b/a (\n{}\n  );\n", body.join("\n  |\n")));
    s
}

const LR: &[&str] = &["T", "H", "Wl", "Wr", "Sl", "Sr", "E", "Dl", "Dr"];
const HOLD_LEFT: &[&str] = &["Sl", "Dl", "E"];
const HOLD_RIGHT: &[&str] = &["Sr", "Dr", "E"];

/// One-letter rules `X^ ⇝ X'`.
fn lr_single() -> Vec<(&'static str, &'static str)> {
    vec![("T", "H"), ("H", "Wl"), ("H", "Wr"), ("Dl", "H"), ("Dr", "H")]
}

/// Two-letter rules `XY ⇝ X'Y'`; `left_marked` tells which of the two is hatted.
fn lr_double() -> Vec<(bool, [&'static str; 2], [&'static str; 2])> {
    let mut rules = Vec::new();
    for &a in LR {
        let hl = HOLD_LEFT.contains(&a);
        let hr = HOLD_RIGHT.contains(&a);
        if !hr {
            rules.push((false, [a, "Wl"], [a, "Sl"]));
        }
        if !hl {
            rules.push((true, ["Wr", a], ["Sr", a]));
            rules.push((true, ["Sl", a], ["E", a]));
        } else {
            rules.push((true, ["Sl", a], ["Dl", a]));
        }
        if !hr {
            rules.push((false, [a, "Sr"], [a, "E"]));
        } else {
            rules.push((false, [a, "Sr"], [a, "Dr"]));
        }
    }
    rules
}

/// Lehmann-Rabin dining philosophers on a ring of at least three.
pub fn lehmann_rabin_source() -> String {
    let mut s = String::new();
    s.push_str(
        "# Lehmann-Rabin randomised dining philosophers.\n\
         #\n\
         # T thinking, H hungry, Wl/Wr waiting for the left/right fork,\n\
         # Sl/Sr holding the left/right fork and waiting for the other one,\n\
         # Dl/Dr about to drop the left/right fork, E eating. A trailing ^ marks\n\
         # the philosopher chosen by the Scheduler. The ring is read clockwise;\n\
         # the last and first philosophers are neighbours. Moves are restricted\n\
         # to rings of at least three philosophers, the size of every initial\n\
         # configuration.\n\n",
    );
    let hatted: Vec<String> = LR.iter().map(|a| format!("{a}^")).collect();
    s.push_str(&format!("alphabet: {}, {};\n\n", LR.join(", "), hatted.join(", ")));
    s.push_str("initial: T T T T*;\n");
    let plain = format!("({})", LR.join(" | "));
    s.push_str(&format!("final:   {plain}* E {plain}*;\n\n"));
    let id = format!("({})*", LR.iter().map(|a| format!("{a}/{a}")).collect::<Vec<_>>().join(" | "));

    let mut p1 = Vec::new();
    let mut singles: Vec<&str> = lr_single().iter().map(|r| r.0).collect();
    singles.dedup();
    for a in singles {
        p1.push(format!("{id} {a}/{a}^ {id}"));
    }
    for (left_marked, [x, y], _) in lr_double() {
        if left_marked {
            p1.push(format!("{id} {x}/{x}^ {y}/{y} {id}"));
            p1.push(format!("{y}/{y} {id} {x}/{x}^"));
        } else {
            p1.push(format!("{id} {x}/{x} {y}/{y}^ {id}"));
            p1.push(format!("{y}/{y}^ {id} {x}/{x}"));
        }
    }
    p1.dedup();
    let mut p2 = Vec::new();
    for (x, x2) in lr_single() {
        p2.push(format!("{id} {x}^/{x2} {id}"));
    }
    for (left_marked, [x, y], [x2, y2]) in lr_double() {
        let (hx, hy) = if left_marked { (format!("{x}^"), y.to_string()) } else { (x.to_string(), format!("{y}^")) };
        p2.push(format!("{id} {hx}/{x2} {hy}/{y2} {id}"));
        p2.push(format!("{hy}/{y2} {id} {hx}/{x2}"));
    }
    s.push_str(&format!("player1: (\n    {}\n  ) & . . .+;\n\n", p1.join("\n  | ")));
    s.push_str(&format!("player2: (\n    {}\n  ) & . . .+;\n\n", p2.join("\n  | ")));
    s.push_str("symmetry: rotation;\n");
    s
}
