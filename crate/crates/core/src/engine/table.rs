//! Data-encoded copy of the edge-type assignment table.
//!
//! Rows and columns are the type vectors of the two endpoints with the new
//! edge excluded. For path edges and spokes the row is `z(e)`; for bridges the
//! table is symmetric, so either order works.

use super::{EdgeClass, TypeVector};

/// One cell of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    /// Combination that cannot occur at maximum degree three.
    Grey,
    Entry { class: EdgeClass, boxed: bool },
}

/// Row/column order of the table.
pub const ORDER: [TypeVector; 10] = [
    TypeVector::new(0, 0, 0),
    TypeVector::new(1, 0, 0),
    TypeVector::new(0, 1, 0),
    TypeVector::new(0, 0, 1),
    TypeVector::new(1, 1, 0),
    TypeVector::new(1, 0, 1),
    TypeVector::new(0, 1, 1),
    TypeVector::new(2, 0, 0),
    TypeVector::new(0, 2, 0),
    TypeVector::new(0, 0, 2),
];

// `.` grey, digits are edge types, a trailing `*` marks a boxed cell.
const ROWS: [&str; 10] = [
    "1  1  1  .  1  2  2  2  1  .",
    "1  3  3  .  3  2  2  2  3  .",
    "1  3  1  .  1  2  2  2  1  .",
    ".  .  .  .  .  .  .  .  .  .",
    "1  3  1  .  1  1* 1* 1* 1  .",
    "2  2  2  .  2* 2  2  2  2* .",
    "2  2  2  .  2* 2  2  2  2* .",
    "2  2  2  .  2* 2  2  2  2* .",
    "1  3  1  .  1  1* 1* 1* 1  .",
    ".  .  .  .  .  .  .  .  .  .",
];

fn index_of(t: TypeVector) -> Option<usize> {
    ORDER.iter().position(|&o| o == t)
}

/// Table entry for `(row, col)`; type vectors outside the table are grey.
pub fn lookup(row: TypeVector, col: TypeVector) -> Cell {
    let (Some(r), Some(c)) = (index_of(row), index_of(col)) else {
        return Cell::Grey;
    };
    let token = ROWS[r].split_whitespace().nth(c).expect("ten columns per row");
    let boxed = token.ends_with('*');
    match token.trim_end_matches('*') {
        "1" => Cell::Entry { class: EdgeClass::Path, boxed },
        "2" => Cell::Entry { class: EdgeClass::Spoke, boxed },
        "3" => Cell::Entry { class: EdgeClass::Bridge, boxed },
        _ => Cell::Grey,
    }
}

/// Every non-grey `(row, col)` pair.
pub fn non_grey_cells() -> Vec<(TypeVector, TypeVector)> {
    let mut out = Vec::new();
    for &r in &ORDER {
        for &c in &ORDER {
            if lookup(r, c) != Cell::Grey {
                out.push((r, c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_entries() {
        let t = TypeVector::new;
        assert_eq!(
            lookup(t(0, 0, 0), t(0, 0, 0)),
            Cell::Entry { class: EdgeClass::Path, boxed: false }
        );
        assert_eq!(
            lookup(t(1, 0, 0), t(1, 0, 0)),
            Cell::Entry { class: EdgeClass::Bridge, boxed: false }
        );
        assert_eq!(
            lookup(t(2, 0, 0), t(0, 0, 0)),
            Cell::Entry { class: EdgeClass::Spoke, boxed: false }
        );
        assert_eq!(
            lookup(t(2, 0, 0), t(1, 1, 0)),
            Cell::Entry { class: EdgeClass::Spoke, boxed: true }
        );
        assert_eq!(lookup(t(0, 0, 1), t(0, 0, 0)), Cell::Grey);
        assert_eq!(lookup(t(3, 0, 0), t(0, 0, 0)), Cell::Grey);
    }

    #[test]
    fn symmetric_outside_boxes() {
        for &r in &ORDER {
            for &c in &ORDER {
                match (lookup(r, c), lookup(c, r)) {
                    (Cell::Entry { boxed: true, .. }, _) | (_, Cell::Entry { boxed: true, .. }) => {}
                    (a, b) => assert_eq!(a, b, "{r} vs {c}"),
                }
            }
        }
    }

    #[test]
    fn sixty_four_live_cells() {
        assert_eq!(non_grey_cells().len(), 64);
    }
}
