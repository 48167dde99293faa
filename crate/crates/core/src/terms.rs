//! Term expressions: the textual covariate language of model specs.
//!
//! Grammar, with `attr` and `level` free of `(`, `)`, `,` and `=`:
//!
//! ```text
//! term    := mean(attr) | centered_mean(attr) | similarity(attr)
//!          | any(attr=level) | both(attr=level) | one(attr=level)
//!          | same(attr) | sample(id)
//!          | or(net) | mutual(net) | asymmetric(net)
//!          | product(term,term)
//! ```
//!
//! `Display` prints the canonical form (no whitespace), which doubles as the
//! term's column label in fitted results.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::builders;
use crate::error::{Error, Result};
use crate::matrix::DyadicMatrix;
use crate::panel::{NodePanel, NominationNetwork};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermExpr {
    Mean(String),
    CenteredMean(String),
    Similarity(String),
    Any { attr: String, level: String },
    Both { attr: String, level: String },
    One { attr: String, level: String },
    Same(String),
    Sample(String),
    Or(String),
    Mutual(String),
    Asymmetric(String),
    Product(Box<TermExpr>, Box<TermExpr>),
}

impl core::fmt::Display for TermExpr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TermExpr::Mean(a) => write!(f, "mean({a})"),
            TermExpr::CenteredMean(a) => write!(f, "centered_mean({a})"),
            TermExpr::Similarity(a) => write!(f, "similarity({a})"),
            TermExpr::Any { attr, level } => write!(f, "any({attr}={level})"),
            TermExpr::Both { attr, level } => write!(f, "both({attr}={level})"),
            TermExpr::One { attr, level } => write!(f, "one({attr}={level})"),
            TermExpr::Same(a) => write!(f, "same({a})"),
            TermExpr::Sample(s) => write!(f, "sample({s})"),
            TermExpr::Or(n) => write!(f, "or({n})"),
            TermExpr::Mutual(n) => write!(f, "mutual({n})"),
            TermExpr::Asymmetric(n) => write!(f, "asymmetric({n})"),
            TermExpr::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl core::str::FromStr for TermExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<TermExpr> {
        let mut p = Parser { src: s, pos: 0 };
        let expr = p.term()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input after term"));
        }
        Ok(expr)
    }
}

impl TermExpr {
    /// Nomination-network labels this expression references.
    pub fn network_refs(&self) -> Vec<&str> {
        match self {
            TermExpr::Or(n) | TermExpr::Mutual(n) | TermExpr::Asymmetric(n) => {
                alloc::vec![n.as_str()]
            }
            TermExpr::Product(a, b) => {
                let mut v = a.network_refs();
                v.extend(b.network_refs());
                v
            }
            _ => Vec::new(),
        }
    }

    /// True when the expression involves a sample indicator.
    pub fn references_sample(&self) -> bool {
        match self {
            TermExpr::Sample(_) => true,
            TermExpr::Product(a, b) => a.references_sample() || b.references_sample(),
            _ => false,
        }
    }

    /// Builds the covariate matrix for this term.
    pub fn evaluate(
        &self,
        panel: &NodePanel,
        network: Option<&NominationNetwork>,
    ) -> Result<DyadicMatrix> {
        let net = |name: &str| -> Result<&NominationNetwork> {
            match network {
                Some(n) if n.label() == name => Ok(n),
                _ => Err(Error::InvalidSpec(format!(
                    "term references nomination network '{name}' but none with that label is loaded"
                ))),
            }
        };
        match self {
            TermExpr::Mean(a) => builders::mean_matrix(panel, a),
            TermExpr::CenteredMean(a) => builders::centered_mean_matrix(panel, a),
            TermExpr::Similarity(a) => builders::similarity_matrix(panel, a),
            TermExpr::Any { attr, level } => builders::dummy_any(panel, attr, level),
            TermExpr::Both { attr, level } => builders::dummy_both(panel, attr, level),
            TermExpr::One { attr, level } => builders::dummy_one(panel, attr, level),
            TermExpr::Same(a) => builders::dummy_same(panel, a),
            TermExpr::Sample(s) => builders::sample_dummy(panel.roster(), &s.as_str().into()),
            TermExpr::Or(n) => {
                let m = builders::symmetrize_or(net(n)?);
                dims_match(&m, panel)?;
                Ok(m)
            }
            TermExpr::Mutual(n) => {
                let m = builders::mutual_matrix(net(n)?);
                dims_match(&m, panel)?;
                Ok(m)
            }
            TermExpr::Asymmetric(n) => {
                let m = builders::asymmetric_matrix(net(n)?);
                dims_match(&m, panel)?;
                Ok(m)
            }
            TermExpr::Product(a, b) => {
                let ma = a.evaluate(panel, network)?;
                let mb = b.evaluate(panel, network)?;
                let mut m = builders::product_matrix(&ma, &mb)?;
                // Canonical label, independent of the factors' own labels.
                m.set_label(self.to_string());
                Ok(m)
            }
        }
    }
}

fn dims_match(m: &DyadicMatrix, panel: &NodePanel) -> Result<()> {
    if m.n() != panel.n() {
        return Err(Error::DimensionMismatch {
            expected: panel.n(),
            found: m.n(),
        });
    }
    Ok(())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> Error {
        Error::TermSyntax {
            expr: self.src.into(),
            reason: format!("{reason} (at byte {})", self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    /// A run of characters that can appear in names: anything but the
    /// grammar's own punctuation. Trailing whitespace is trimmed.
    fn name(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        for (off, c) in self.src[start..].char_indices() {
            if matches!(c, '(' | ')' | ',' | '=') {
                self.pos = start + off;
                let s = self.src[start..self.pos].trim_end();
                if s.is_empty() {
                    return Err(self.err("expected a name"));
                }
                return Ok(s);
            }
        }
        self.pos = self.src.len();
        let s = self.src[start..].trim_end();
        if s.is_empty() {
            return Err(self.err("expected a name"));
        }
        Ok(s)
    }

    fn term(&mut self) -> Result<TermExpr> {
        let head = self.name()?;
        self.expect('(')?;
        let expr = match head {
            "mean" => TermExpr::Mean(self.name()?.into()),
            "centered_mean" => TermExpr::CenteredMean(self.name()?.into()),
            "similarity" => TermExpr::Similarity(self.name()?.into()),
            "same" => TermExpr::Same(self.name()?.into()),
            "sample" => TermExpr::Sample(self.name()?.into()),
            "or" => TermExpr::Or(self.name()?.into()),
            "mutual" => TermExpr::Mutual(self.name()?.into()),
            "asymmetric" => TermExpr::Asymmetric(self.name()?.into()),
            "any" | "both" | "one" => {
                let attr = self.name()?.into();
                self.expect('=')?;
                let level = self.name()?.into();
                match head {
                    "any" => TermExpr::Any { attr, level },
                    "both" => TermExpr::Both { attr, level },
                    _ => TermExpr::One { attr, level },
                }
            }
            "product" => {
                let a = self.term()?;
                self.expect(',')?;
                let b = self.term()?;
                TermExpr::Product(Box::new(a), Box::new(b))
            }
            other => return Err(self.err(&format!("unknown builder '{other}'"))),
        };
        self.expect(')')?;
        Ok(expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::Roster;

    fn parse(s: &str) -> TermExpr {
        s.parse().unwrap()
    }

    #[test]
    fn parses_simple_builders() {
        assert_eq!(parse("mean(depression)"), TermExpr::Mean("depression".into()));
        assert_eq!(
            parse("any(gender=female)"),
            TermExpr::Any {
                attr: "gender".into(),
                level: "female".into()
            }
        );
        assert_eq!(parse("or(friendship)"), TermExpr::Or("friendship".into()));
        assert_eq!(parse("sample(two)"), TermExpr::Sample("two".into()));
    }

    #[test]
    fn parses_nested_product() {
        let t = parse("product(mean(depression),similarity(depression))");
        assert_eq!(
            t,
            TermExpr::Product(
                Box::new(TermExpr::Mean("depression".into())),
                Box::new(TermExpr::Similarity("depression".into()))
            )
        );
        // Round-trips through canonical text.
        assert_eq!(t.to_string().parse::<TermExpr>().unwrap(), t);
    }

    #[test]
    fn whitespace_is_tolerated_and_canonicalized() {
        let t = parse(" product( mean(depression) , or(friendship) ) ");
        assert_eq!(t.to_string(), "product(mean(depression),or(friendship))");
    }

    #[test]
    fn rejects_malformed_terms() {
        for bad in [
            "mean",
            "mean()",
            "mean(depression",
            "mean(depression))",
            "unknown(x)",
            "any(gender)",
            "product(mean(x))",
            "",
        ] {
            assert!(bad.parse::<TermExpr>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn evaluate_dispatches_to_builders() {
        let mut r = Roster::new();
        r.insert("a".into(), "one".into()).unwrap();
        r.insert("b".into(), "one".into()).unwrap();
        let mut p = NodePanel::new(r);
        p.add_numeric("dep", alloc::vec![Some(4.0), Some(6.0)]).unwrap();

        let m = parse("mean(dep)").evaluate(&p, None).unwrap();
        assert_eq!(m.get(0, 1), Some(5.0));

        let prod = parse("product(mean(dep),similarity(dep))")
            .evaluate(&p, None)
            .unwrap();
        assert_eq!(prod.get(0, 1), Some(-10.0));
        assert_eq!(prod.label(), "product(mean(dep),similarity(dep))");

        // Network term without a loaded network is a spec error.
        assert!(matches!(
            parse("or(friendship)").evaluate(&p, None),
            Err(Error::InvalidSpec(_))
        ));
        let mut net = NominationNetwork::new(2, "friendship");
        net.mark_respondent(0);
        net.mark_respondent(1);
        net.add_nomination(0, 1).unwrap();
        let or = parse("or(friendship)").evaluate(&p, Some(&net)).unwrap();
        assert_eq!(or.get(0, 1), Some(1.0));
        // Label mismatch is also an error.
        assert!(parse("or(advice)").evaluate(&p, Some(&net)).is_err());
    }

    #[test]
    fn network_refs_and_sample_flags() {
        let t = parse("product(mean(dep),or(friendship))");
        assert_eq!(t.network_refs(), alloc::vec!["friendship"]);
        assert!(!t.references_sample());
        assert!(parse("sample(two)").references_sample());
        assert!(parse("product(sample(two),mean(dep))").references_sample());
    }
}
