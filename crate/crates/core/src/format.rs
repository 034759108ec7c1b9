//! Line-oriented input files: open books, five-manifold descriptions and fact sets.
//!
//! Every file is a list of `keyword args…` lines; `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::certifier::{C1Declaration, FactToken, FiveFoldDescription};
use crate::mcg::TwistWord;
use crate::openbook::{OpenBook, RawOpenBook, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (line, ""),
    }
}

/// Parses `key=value` pairs, rejecting keys outside `allowed` and repeats.
fn key_values<'a>(line: usize, args: &'a str, allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a str>, ParseError> {
    let mut out = BTreeMap::new();
    for part in args.split_whitespace() {
        let Some((k, v)) = part.split_once('=') else {
            return err(line, format!("expected key=value, found `{part}`"));
        };
        if !allowed.contains(&k) {
            return err(line, format!("unknown key `{k}` (expected one of {})", allowed.join(", ")));
        }
        if out.insert(k, v).is_some() {
            return err(line, format!("key `{k}` given twice"));
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(line: usize, key: &str, value: Option<&&str>) -> Result<T, ParseError> {
    match value {
        None => err(line, format!("missing `{key}=`")),
        Some(v) => v.parse().or_else(|_| err(line, format!("`{key}` must be a non-negative integer, got `{v}`"))),
    }
}

fn once(seen: &mut Option<usize>, line: usize, keyword: &str) -> Result<(), ParseError> {
    if let Some(first) = seen.replace(line) {
        return err(line, format!("duplicate `{keyword}` line (first on line {first})"));
    }
    Ok(())
}

fn parse_contact(line: usize, args: &str) -> Result<C1Declaration, ParseError> {
    let kv = key_values(line, args, &["c1"])?;
    match kv.get("c1") {
        Some(v) => v.parse().or_else(|e: String| err(line, e)),
        None => err(line, "missing `c1=`"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenBookFile {
    pub book: OpenBook,
    pub c1: C1Declaration,
}

pub fn parse_openbook_file(text: &str) -> Result<OpenBookFile, ParseError> {
    let mut raw = RawOpenBook::default();
    let mut c1 = C1Declaration::Auto;
    let (mut surface_line, mut word_line, mut contact_line, mut label_line) = (None, None, None, None);
    for (n, line) in content_lines(text) {
        let (keyword, args) = split_keyword(line);
        match keyword {
            "surface" => {
                once(&mut surface_line, n, keyword)?;
                let kv = key_values(n, args, &["g", "n", "belts"])?;
                raw.genus = number(n, "g", kv.get("g"))?;
                raw.boundary = number(n, "n", kv.get("n"))?;
                raw.belts = if kv.contains_key("belts") { number(n, "belts", kv.get("belts"))? } else { 0 };
            }
            "word" => {
                once(&mut word_line, n, keyword)?;
                raw.word = args.parse::<TwistWord>().or_else(|e| err(n, e.to_string()))?;
            }
            "contact" => {
                once(&mut contact_line, n, keyword)?;
                c1 = parse_contact(n, args)?;
            }
            "label" => {
                once(&mut label_line, n, keyword)?;
                raw.label = args.to_string();
            }
            other => return err(n, format!("unknown keyword `{other}`")),
        }
    }
    let Some(surface_at) = surface_line else {
        return err(text.lines().count().max(1), "missing `surface` line");
    };
    if let Some(v) = raw.validate().into_iter().next() {
        let at = match v {
            Violation::CurveNotInAtlas { .. } => word_line.unwrap_or(surface_at),
            _ => surface_at,
        };
        return err(at, v.to_string());
    }
    let book = raw.build().expect("validated above");
    Ok(OpenBookFile { book, c1 })
}

/// Canonical text; `parse_openbook_file` inverts it exactly.
pub fn render_openbook_file(file: &OpenBookFile) -> String {
    let mut out = String::new();
    if !file.book.label().is_empty() {
        out.push_str(&format!("label {}\n", file.book.label()));
    }
    out.push_str(&format!("surface {}\n", file.book.page()));
    let word = file.book.monodromy().to_string();
    out.push_str(if word.is_empty() { "word\n" } else { "word " });
    if !word.is_empty() {
        out.push_str(&word);
        out.push('\n');
    }
    out.push_str(&format!("contact c1={}\n", file.c1.token()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiveFoldFile {
    pub description: FiveFoldDescription,
    pub c1_zero: bool,
    pub label: String,
}

fn header<'a>(text: &'a str, keyword: &str) -> Result<Vec<(usize, &'a str)>, ParseError> {
    let mut lines: Vec<(usize, &str)> = content_lines(text).collect();
    match lines.first() {
        Some((_, first)) if *first == keyword => {
            lines.remove(0);
            Ok(lines)
        }
        Some((n, _)) => err(*n, format!("expected `{keyword}` header")),
        None => err(1, format!("expected `{keyword}` header")),
    }
}

pub fn parse_fivefold_file(text: &str) -> Result<FiveFoldFile, ParseError> {
    let lines = header(text, "fivefold")?;
    let mut description = FiveFoldDescription::sphere();
    let mut mk: BTreeMap<u64, u64> = BTreeMap::new();
    let mut c1 = None;
    let mut label = String::new();
    let (mut contact_line, mut label_line) = (None, None);
    for (n, line) in lines {
        let (keyword, args) = split_keyword(line);
        match keyword {
            "summand" => {
                let (kind, rest) = split_keyword(args);
                match kind {
                    "s2xs3" => {
                        let kv = key_values(n, rest, &["count"])?;
                        description.s2xs3_count += number::<u64>(n, "count", kv.get("count"))?;
                    }
                    "twisted" => {
                        let kv = key_values(n, rest, &["count"])?;
                        description.twisted_count += number::<u64>(n, "count", kv.get("count"))?;
                    }
                    "mk" => {
                        let kv = key_values(n, rest, &["k", "count"])?;
                        let k: u64 = number(n, "k", kv.get("k"))?;
                        if k < 2 {
                            return err(n, format!("M_k summands need k >= 2, got k={k}"));
                        }
                        *mk.entry(k).or_default() += number::<u64>(n, "count", kv.get("count"))?;
                    }
                    other => return err(n, format!("unknown summand `{other}` (expected s2xs3, mk or twisted)")),
                }
            }
            "contact" => {
                once(&mut contact_line, n, keyword)?;
                c1 = match parse_contact(n, args)? {
                    C1Declaration::Zero => Some(true),
                    C1Declaration::Nonzero => Some(false),
                    C1Declaration::Auto => return err(n, "five-manifolds need c1=zero or c1=nonzero"),
                };
            }
            "label" => {
                once(&mut label_line, n, keyword)?;
                label = args.to_string();
            }
            other => return err(n, format!("unknown keyword `{other}`")),
        }
    }
    description.mk = mk.into_iter().filter(|(_, c)| *c > 0).collect();
    let Some(c1_zero) = c1 else {
        return err(text.lines().count().max(1), "missing `contact c1=…` line");
    };
    Ok(FiveFoldFile { description, c1_zero, label })
}

pub fn render_fivefold_file(file: &FiveFoldFile) -> String {
    let d = &file.description;
    let mut out = String::from("fivefold\n");
    if !file.label.is_empty() {
        out.push_str(&format!("label {}\n", file.label));
    }
    if d.s2xs3_count > 0 {
        out.push_str(&format!("summand s2xs3 count={}\n", d.s2xs3_count));
    }
    for (k, c) in &d.mk {
        out.push_str(&format!("summand mk k={k} count={c}\n"));
    }
    if d.twisted_count > 0 {
        out.push_str(&format!("summand twisted count={}\n", d.twisted_count));
    }
    out.push_str(&format!("contact c1={}\n", if file.c1_zero { "zero" } else { "nonzero" }));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactsFile {
    pub facts: BTreeSet<FactToken>,
    pub label: String,
}

/// `facts` header, then `assume <token>` and optional `label` lines.
pub fn parse_facts_file(text: &str) -> Result<FactsFile, ParseError> {
    let lines = header(text, "facts")?;
    let mut facts = BTreeSet::new();
    let mut label = String::new();
    let mut label_line = None;
    for (n, line) in lines {
        let (keyword, args) = split_keyword(line);
        match keyword {
            "assume" => {
                let token = args.parse::<FactToken>().or_else(|e| err(n, e.to_string()))?;
                facts.insert(token);
            }
            "label" => {
                once(&mut label_line, n, keyword)?;
                label = args.to_string();
            }
            other => return err(n, format!("unknown keyword `{other}`")),
        }
    }
    Ok(FactsFile { facts, label })
}

pub fn render_facts_file(file: &FactsFile) -> String {
    let mut out = String::from("facts\n");
    if !file.label.is_empty() {
        out.push_str(&format!("label {}\n", file.label));
    }
    for f in &file.facts {
        out.push_str(&format!("assume {f}\n"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputFile {
    OpenBook(OpenBookFile),
    FiveFold(FiveFoldFile),
    Facts(FactsFile),
}

/// Dispatches on the first keyword: `fivefold`, `facts`, or an open book.
pub fn parse_input(text: &str) -> Result<InputFile, ParseError> {
    match content_lines(text).next().map(|(_, l)| split_keyword(l).0) {
        Some("fivefold") => parse_fivefold_file(text).map(InputFile::FiveFold),
        Some("facts") => parse_facts_file(text).map(InputFile::Facts),
        _ => parse_openbook_file(text).map(InputFile::OpenBook),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_and_trefoil() {
        let f = parse_openbook_file("surface g=0 n=1\nword\n").unwrap();
        assert_eq!(f.book.monodromy().len(), 0);
        assert_eq!(f.c1, C1Declaration::Auto);
        let f = parse_openbook_file("# trefoil\nlabel trefoil\nsurface g=1 n=1\nword +a1 +b1\n").unwrap();
        assert_eq!(f.book, OpenBook::trefoil());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_openbook_file("surface g=0 n=1\n\nword +a1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_openbook_file("surface g=0 n=1 q=2\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("unknown key"));
        let e = parse_openbook_file("surface g=0 n=1\nfoo bar\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_openbook_file("surface g=0 n=0\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_openbook_file("word +d1\n").is_err());
        assert!(parse_openbook_file("surface g=0 n=2\ncontact c1=maybe\n").is_err());
    }

    #[test]
    fn openbook_round_trip() {
        let text = "label rp3\nsurface g=0 n=2 belts=0\nword +d1 +d1\ncontact c1=zero\n";
        let f = parse_openbook_file(text).unwrap();
        let rendered = render_openbook_file(&f);
        assert_eq!(parse_openbook_file(&rendered).unwrap(), f);
        assert_eq!(render_openbook_file(&parse_openbook_file(&rendered).unwrap()), rendered);
    }

    #[test]
    fn fivefold_files() {
        let f = parse_fivefold_file("fivefold\ncontact c1=zero\n").unwrap();
        assert_eq!(f.description, FiveFoldDescription::sphere());
        let f = parse_fivefold_file("fivefold\nsummand s2xs3 count=3\nsummand mk k=4 count=1\ncontact c1=zero\n").unwrap();
        assert_eq!(f.description.s2xs3_count, 3);
        assert_eq!(f.description.mk, vec![(4, 1)]);
        assert_eq!(parse_fivefold_file(&render_fivefold_file(&f)).unwrap(), f);
        let e = parse_fivefold_file("fivefold\nsummand mk k=1 count=1\ncontact c1=zero\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_fivefold_file("fivefold\n").is_err());
        assert!(parse_fivefold_file("fivefold\ncontact c1=auto\n").is_err());
    }

    #[test]
    fn facts_files() {
        let f = parse_facts_file("facts\nlabel x\nassume base-embeds\nassume summand-embeds(2)\n").unwrap();
        assert_eq!(f.facts.len(), 2);
        assert_eq!(parse_facts_file(&render_facts_file(&f)).unwrap(), f);
        assert_eq!(parse_facts_file("facts\nassume nope\n").unwrap_err().line, 2);
    }

    #[test]
    fn input_dispatch() {
        assert!(matches!(parse_input("fivefold\ncontact c1=zero\n"), Ok(InputFile::FiveFold(_))));
        assert!(matches!(parse_input("facts\n"), Ok(InputFile::Facts(_))));
        assert!(matches!(parse_input("surface g=0 n=1\n"), Ok(InputFile::OpenBook(_))));
    }
}
