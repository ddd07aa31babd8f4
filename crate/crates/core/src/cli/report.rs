//! Tabular reports and their text / JSON / CSV renderings.

use serde::Serialize;

use crate::logcomplex::LogComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Number formatting shared by all renderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumberStyle {
    pub digits: usize,
    pub format: OutputFormat,
}

/// Rounds `m * 10^e` to `digits` significant figures, renormalising when
/// the mantissa rounds up to 10.
fn round_mantissa(m: f64, e: i64, digits: usize) -> (String, i64) {
    let decimals = digits.saturating_sub(1);
    let s = format!("{:.*}", decimals, m.abs());
    if s.starts_with("10") {
        (format!("{:.*}", decimals, m.abs() / 10.0), e + 1)
    } else {
        (s, e)
    }
}

fn split(v: f64) -> (f64, i64) {
    if v == 0.0 || !v.is_finite() {
        return (v, 0);
    }
    let e = v.abs().log10().floor() as i64;
    // two-stage scaling keeps 10^e representable for subnormal v
    let m = if e < -300 {
        v * 1e300 / 10f64.powi(e as i32 + 300)
    } else {
        v / 10f64.powi(e as i32)
    };
    if m.abs() >= 10.0 {
        (m / 10.0, e + 1)
    } else if m.abs() < 1.0 {
        (m * 10.0, e - 1)
    } else {
        (m, e)
    }
}

impl NumberStyle {
    /// Real number from its `(mantissa, decimal exponent)` split.
    pub fn parts(&self, m: f64, e: i64) -> String {
        if !m.is_finite() {
            return format!("{m}");
        }
        let sign = if m < 0.0 { "-" } else { "" };
        let (body, e) = if m == 0.0 {
            (format!("{:.*}", self.digits.saturating_sub(1), 0.0), 0)
        } else {
            round_mantissa(m, e, self.digits)
        };
        match self.format {
            OutputFormat::Text => {
                let es = if e < 0 { '-' } else { '+' };
                format!("{sign}{body}({es}{:02})", e.abs())
            }
            _ => format!("{sign}{body}e{e}"),
        }
    }

    pub fn real(&self, v: f64) -> String {
        let (m, e) = split(v);
        self.parts(m, e)
    }

    /// Real and imaginary parts of a log-form value.
    pub fn complex_parts(&self, v: &LogComplex) -> (String, String) {
        let ((mr, er), (mi, ei)) = v.parts_decimal();
        (self.parts(mr, er), self.parts(mi, ei))
    }

    /// Fixed-point value (angles, `mu`, ...), `digits` after the point.
    pub fn fixed(&self, v: f64) -> String {
        format!("{:.*}", self.digits, v)
    }
}

/// A titled table of preformatted cells.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Report {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serialises");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        out.push_str(&self.title);
        out.push('\n');
        out.push_str(&line(&self.columns));
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(&rule));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str("note: ");
            out.push_str(n);
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn style(format: OutputFormat, digits: usize) -> NumberStyle {
        NumberStyle { digits, format }
    }

    #[test]
    fn parenthesised_exponent_notation() {
        let s = style(OutputFormat::Text, 6);
        assert_eq!(s.real(1.76101e-2), "1.76101(-02)");
        assert_eq!(s.real(-1.11431e13), "-1.11431(+13)");
        assert_eq!(s.real(9.999996), "1.00000(+01)");
        assert_eq!(s.real(0.0), "0.00000(+00)");
        assert_eq!(s.real(3.8854903e-317), "3.88549(-317)");
        assert_eq!(s.real(-5e-324), "-4.94066(-324)");
    }

    #[test]
    fn decimal_strings() {
        let s = style(OutputFormat::Json, 12);
        assert_eq!(s.real(-5.42627e-15), "-5.42627000000e-15");
        let v: f64 = s.real(1.0 / 3.0).parse().unwrap();
        assert_eq!(s.real(v), s.real(1.0 / 3.0));
    }

    #[test]
    fn csv_uses_line_feeds_and_quotes() {
        let mut r = Report::new("t", &["a", "b"]);
        r.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(r.render(OutputFormat::Csv), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("t", &["a"]);
        r.push(vec!["1.5e0".into()]);
        let back: Report = serde_json::from_str(&r.render(OutputFormat::Json)).unwrap();
        assert_eq!(back, r);
    }
}
