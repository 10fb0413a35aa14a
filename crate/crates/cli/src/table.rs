//! Flat tables for the csv, human and gnuplot outputs.

use std::io::{self, Write};

use heun_core::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "true" } else { "false" }.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// Shortest representation that parses back to the same bits.
pub fn float_text(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Prepends a `set` column holding `index`.
    pub fn tagged(mut self, index: usize) -> Self {
        self.columns.insert(0, "set".into());
        for row in &mut self.rows {
            row.insert(0, Cell::from(index));
        }
        self
    }

    /// Concatenates tables with identical columns.
    pub fn concat(tables: Vec<Table>) -> Table {
        let mut iter = tables.into_iter();
        let Some(mut first) = iter.next() else {
            return Table::default();
        };
        for t in iter {
            debug_assert_eq!(t.columns, first.columns);
            first.rows.extend(t.rows);
        }
        first
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => float_text(*v),
                Cell::Text(v) => v.clone(),
                Cell::Missing => String::new(),
            }))?;
        }
        w.flush()
    }

    /// `#`-prefixed header, whitespace-separated columns, `NaN` for gaps.
    pub fn write_dat<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# {}", self.columns.join(" "))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(v) => format!("{v:.17e}"),
                    Cell::Text(v) => v.replace(char::is_whitespace, "_"),
                    Cell::Missing => "NaN".into(),
                })
                .collect();
            writeln!(out, "{}", fields.join(" "))?;
        }
        Ok(())
    }

    pub fn write_human<W: Write>(&self, mut out: W) -> io::Result<()> {
        let text: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Cell::Int(v) => v.to_string(),
                        Cell::Float(v) => format!("{v:.12e}"),
                        Cell::Text(v) => v.clone(),
                        Cell::Missing => "-".into(),
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                text.iter()
                    .map(|r| r[i].chars().count())
                    .chain([self.columns[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(&self.columns))?;
        for row in &text {
            writeln!(out, "{}", line(row))?;
        }
        Ok(())
    }
}

/// Two cells, real part then imaginary part.
pub fn complex_cells(c: Option<Complex64>) -> [Cell; 2] {
    match c {
        Some(c) => [Cell::Float(c.re), Cell::Float(c.im)],
        None => [Cell::Missing, Cell::Missing],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn any_finite_float_round_trips(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            prop_assert_eq!(float_text(x).parse::<f64>().unwrap().to_bits(), bits);
        }
    }

    #[test]
    fn float_text_round_trips() {
        for x in [0.0, 1.0, -0.1, 1e-300, 3.0e17, std::f64::consts::PI, 2.5e-5, -0.0] {
            assert_eq!(float_text(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_and_dat_shapes() {
        let mut t = Table::new(&["k", "re", "note"]);
        t.push(vec![Cell::from(0usize), Cell::from(1.5), Cell::from("a b")]);
        t.push(vec![Cell::from(1usize), Cell::Missing, Cell::from("c")]);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "k,re,note\n0,1.5,a b\n1,,c\n");
        let mut dat = Vec::new();
        t.write_dat(&mut dat).unwrap();
        let dat = String::from_utf8(dat).unwrap();
        assert!(dat.starts_with("# k re note\n0 1.50000000000000000e0 a_b\n"));
        assert!(dat.ends_with("1 NaN c\n"));
    }

    #[test]
    fn tagging_prepends_set_column() {
        let mut t = Table::new(&["x"]);
        t.push(vec![Cell::from(2.0)]);
        let t = t.tagged(3);
        assert_eq!(t.columns, vec!["set", "x"]);
        assert_eq!(t.rows[0][0], Cell::Int(3));
    }
}
