//! The 6 by 6 grid of minimal degrees with a signature gap in two
//! variables, with fresh certificates attached wherever the stable-range
//! construction reaches the cell.

use super::Certificate;
use crate::constructions::stability::stability_construct;
use crate::Result;
use serde::Serialize;

/// One cell of the grid: the minimal degree marker for signature pair
/// `(a, b)`, and a certificate when the entry is realized here.
#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub a: usize,
    pub b: usize,
    pub status: String,
    pub source: String,
    pub certificate: Option<Certificate>,
}

fn cell_status(a: usize, b: usize) -> &'static str {
    match (a, b) {
        (0, 0) => "0",
        (1, 1) => "-",
        _ if a == 0 || b == 0 => "-",
        (2, 1) | (1, 2) => "1",
        (3, 1) | (1, 3) | (2, 2) => "3",
        (3, 2) | (2, 3) => "e",
        _ if a.min(b) == 1 => "f",
        _ => "inf",
    }
}

/// All 36 cells for `0 <= a, b <= 5`, row by row in `b`. Cells marked
/// `inf` carry a verified certificate built on the spot.
pub fn signature_table() -> Result<Vec<TableCell>> {
    let mut cells = Vec::with_capacity(36);
    for b in 0..=5 {
        for a in 0..=5 {
            let status = cell_status(a, b);
            let (source, certificate) = if status == "inf" {
                ("constructed", Some(stability_construct(2, a, b, 0)?))
            } else {
                ("imported", None)
            };
            cells.push(TableCell {
                a,
                b,
                status: status.to_string(),
                source: source.to_string(),
                certificate,
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_matches_the_frozen_rows() {
        let rows_b0_up = [
            ["0", "-", "-", "-", "-", "-"],
            ["-", "-", "1", "3", "f", "f"],
            ["-", "1", "3", "e", "inf", "inf"],
            ["-", "3", "e", "inf", "inf", "inf"],
            ["-", "f", "inf", "inf", "inf", "inf"],
            ["-", "f", "inf", "inf", "inf", "inf"],
        ];
        for (b, row) in rows_b0_up.iter().enumerate() {
            for (a, want) in row.iter().enumerate() {
                assert_eq!(cell_status(a, b), *want, "cell ({a}, {b})");
            }
        }
    }

    #[test]
    fn landmark_cells() {
        assert_eq!(cell_status(2, 2), "3");
        assert_eq!(cell_status(3, 2), "e");
        assert_eq!(cell_status(2, 1), "1");
    }

    #[test]
    fn unbounded_cells_carry_verified_certificates() {
        let cells = signature_table().unwrap();
        assert_eq!(cells.len(), 36);
        let unbounded: Vec<&TableCell> =
            cells.iter().filter(|c| c.status == "inf").collect();
        assert_eq!(unbounded.len(), 13);
        for cell in unbounded {
            assert_eq!(cell.source, "constructed");
            let cert = cell.certificate.as_ref().unwrap();
            assert!(cert.is_verified(), "cell ({}, {})", cell.a, cell.b);
            assert_eq!(cert.params["A"], cell.a.to_string());
            assert_eq!(cert.params["B"], cell.b.to_string());
        }
    }

    #[test]
    fn bounded_cells_have_no_certificate() {
        for cell in signature_table().unwrap() {
            if cell.status != "inf" {
                assert!(cell.certificate.is_none());
                assert_eq!(cell.source, "imported");
            }
        }
    }
}
