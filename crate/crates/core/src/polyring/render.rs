use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::SparsePolynomial;

#[derive(Clone, Copy)]
enum Style {
    Text,
    Latex,
}

/// `x1,...,xn` first and the homogenizing `x0` last, as the equations are
/// usually written.
fn default_order(nvars: usize) -> Vec<usize> {
    (1..nvars).chain(std::iter::once(0)).collect()
}

fn render(poly: &SparsePolynomial, names: &[String], order: &[usize], style: Style) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, term) in poly.terms().iter().enumerate() {
        let negative = term.coeff.is_negative();
        if negative {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let magnitude = term.coeff.abs();
        let mut factors: Vec<String> = Vec::new();
        for &j in order {
            let e = term.mono.exponents()[j];
            if e == 0 {
                continue;
            }
            factors.push(match (style, e) {
                (_, 1) => names[j].clone(),
                (Style::Text, e) => format!("{}^{e}", names[j]),
                (Style::Latex, e) if e < 10 => format!("{}^{e}", names[j]),
                (Style::Latex, e) => format!("{}^{{{e}}}", names[j]),
            });
        }
        let show_coeff = !magnitude.is_one() || factors.is_empty();
        let joiner = match style {
            Style::Text => "*",
            Style::Latex => "",
        };
        if show_coeff {
            let _ = write!(out, "{magnitude}");
            if !factors.is_empty() {
                out.push_str(joiner);
            }
        }
        out.push_str(&factors.join(joiner));
    }
    out
}

impl SparsePolynomial {
    /// Plain-text rendering: `x2^3-2*x1*x2*x3+x3^2*x0`.
    pub fn to_text(&self) -> String {
        let names: Vec<String> = (0..self.nvars()).map(|j| format!("x{j}")).collect();
        render(self, &names, &default_order(self.nvars()), Style::Text)
    }

    /// Text rendering with custom variable names, printed in index order.
    pub fn to_text_named(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars(), "one name per variable");
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let order: Vec<usize> = (0..self.nvars()).collect();
        render(self, &names, &order, Style::Text)
    }

    /// LaTeX rendering: `x_2^3-2x_1x_2x_3+x_3^2x_0`.
    pub fn to_latex(&self) -> String {
        let names: Vec<String> = (0..self.nvars())
            .map(|j| {
                if j < 10 {
                    format!("x_{j}")
                } else {
                    format!("x_{{{j}}}")
                }
            })
            .collect();
        render(self, &names, &default_order(self.nvars()), Style::Latex)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
