use std::io::IsTerminal;

/// Colour is on for terminals unless `ELLSURF_COLOR=0`; `ELLSURF_COLOR=1`
/// forces it on.
pub fn color_enabled() -> bool {
    match std::env::var("ELLSURF_COLOR").as_deref() {
        Ok("0") => false,
        Ok("1") => true,
        _ => std::io::stdout().is_terminal(),
    }
}

#[derive(Clone, Copy)]
pub enum Style {
    Bold,
    Green,
    Red,
}

pub fn paint(s: &str, style: Style) -> String {
    if !color_enabled() {
        return s.to_string();
    }
    let code = match style {
        Style::Bold => "1",
        Style::Green => "32",
        Style::Red => "31",
    };
    format!("\x1b[{code}m{s}\x1b[0m")
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let n = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate().take(n) {
                if i + 1 < n {
                    s.push_str(&format!("{c:<w$}  ", w = widths[i]));
                } else {
                    s.push_str(c);
                }
            }
            s.trim_end().to_string()
        };
        let mut out = paint(&line(&self.header), Style::Bold);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// Aligned `key  value` lines.
pub fn pairs(items: &[(&str, String)]) -> String {
    let w = items.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    items.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}
