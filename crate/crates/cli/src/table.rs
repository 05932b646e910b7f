//! CSV emission: fixed column sets, comma separation, `.` decimal point,
//! and 17 significant digits for reals so rows round-trip bit-exactly.

/// Format a real with full round-trip precision (17 significant digits).
/// Numeric fields in emitted rows must be finite.
pub fn fmt_real(x: f64) -> String {
    assert!(x.is_finite(), "non-finite metric value {x}");
    format!("{x:.16e}")
}

/// A CSV table with a mandatory header.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_through_the_format() {
        for x in [0.5, 1.0 / 3.0, std::f64::consts::FRAC_1_SQRT_2, 1e-300, 0.0] {
            let text = fmt_real(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{text}");
        }
    }

    #[test]
    fn header_comes_first() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), fmt_real(0.5)]);
        let csv = t.to_csv();
        assert!(csv.starts_with("a,b\n1,"));
        assert_eq!(csv.lines().count(), 2);
    }
}
