#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use xmloxide::validation::dtd::{parse_dtd, validate};
use xmloxide::Document;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
}

pub const FIXTURES: [&str; 2] = ["newsidler.tab", "schlick.tab"];

/// Counts duration tokens of every time line by plain whitespace splitting,
/// independent of the compiler's scanner.
pub fn count_time_tokens(source: &str) -> usize {
    source
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|t| t.first() == Some(&"T"))
        .map(|t| t.len() - 1)
        .sum()
}

/// Per-line token counts of the time lines, in source order.
pub fn time_line_token_counts(source: &str) -> Vec<usize> {
    source
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|t| t.first() == Some(&"T"))
        .map(|t| t.len() - 1)
        .collect()
}

pub type Attrs = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct XmlColumn {
    pub duratio: Attrs,
    pub sona: Vec<Attrs>,
}

fn attrs(doc: &Document, id: xmloxide::NodeId) -> Attrs {
    doc.attributes(id)
        .iter()
        .map(|a| (a.name.clone(), a.value.clone()))
        .collect()
}

/// Reads a `tabulatura` document back into plain attribute maps.
pub fn read_columns(xml: &str) -> Vec<XmlColumn> {
    let doc = Document::parse_str(xml).expect("well-formed XML");
    let root = doc.root_element().expect("root element");
    assert_eq!(doc.node_name(root), Some("tabulatura"));
    let mut out = Vec::new();
    for col in doc.children(root).filter(|&c| doc.is_element(c)) {
        assert_eq!(doc.node_name(col), Some("columna"));
        let mut duratio = None;
        let mut sona = Vec::new();
        for child in doc.children(col).filter(|&c| doc.is_element(c)) {
            match doc.node_name(child) {
                Some("duratio") => duratio = Some(attrs(&doc, child)),
                Some("sonum") => sona.push(attrs(&doc, child)),
                other => panic!("unexpected element {other:?}"),
            }
        }
        out.push(XmlColumn {
            duratio: duratio.expect("duratio present"),
            sona,
        });
    }
    out
}

/// Validates `xml` against `dtd` with an independent validator; returns the
/// list of violations.
pub fn dtd_violations(xml: &str, dtd: &str) -> Vec<String> {
    let dtd = parse_dtd(dtd).expect("DTD parses");
    let mut doc = Document::parse_str(xml).expect("well-formed XML");
    let result = validate(&mut doc, &dtd);
    let mut v: Vec<String> = result.errors.iter().map(|e| format!("{e:?}")).collect();
    if !result.is_valid && v.is_empty() {
        v.push("invalid without message".into());
    }
    v
}

/// Counts elements with the given local name anywhere in the document.
pub fn count_elements(xml: &str, name: &str) -> usize {
    let doc = Document::parse_str(xml).expect("well-formed XML");
    doc.descendants(doc.root())
        .filter(|&n| doc.is_element(n) && doc.node_name(n) == Some(name))
        .count()
}

/// Plain fraction compared by cross-multiplication.
#[derive(Debug, Clone, Copy)]
pub struct Frac(pub u128, pub u128);

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    /// Sum, divided through by the gcd so long folds stay in range.
    pub fn add(self, o: Frac) -> Frac {
        let (n, d) = (self.0 * o.1 + o.0 * self.1, self.1 * o.1);
        let g = gcd(n, d).max(1);
        Frac(n / g, d / g)
    }

    pub fn eq_parts(self, num: u64, den: u64) -> bool {
        self.0 * den as u128 == num as u128 * self.1
    }
}

/// Duration of one time-line token, decoded from its text alone.
/// `prev` is the value of the nearest non-carry token to the left.
pub fn decode_duration(token: &str, prev: Option<Frac>) -> Frac {
    match token {
        "-" => prev.expect("carry has a predecessor"),
        "." => Frac(1, 2),
        ".." => Frac(3, 4),
        "..." => Frac(1, 1),
        _ => {
            let core: String = token.chars().filter(|&c| c != '_').collect();
            let (letter, dotted) = match core.strip_suffix('.') {
                Some(l) => (l, true),
                None => (core.as_str(), false),
            };
            let den = match letter {
                "I" => 4,
                "T" => 8,
                "F" => 16,
                "E" => 32,
                other => panic!("not a duration token: {other}"),
            };
            if dotted {
                Frac(3, 2 * den)
            } else {
                Frac(1, den)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum Piece {
    Single(String),
    /// Beam group: bare stem tokens, at least two.
    Beam(Vec<String>),
    Carry,
}

fn stem() -> impl Strategy<Value = String> {
    (
        proptest::sample::select(vec!["I", "T", "F", "E"]),
        proptest::bool::ANY,
    )
        .prop_map(|(l, dot)| format!("{l}{}", if dot { "." } else { "" }))
}

pub fn piece() -> impl Strategy<Value = Piece> {
    proptest::prop_oneof![
        4 => stem().prop_map(Piece::Single),
        1 => proptest::sample::select(vec![".", "..", "..."]).prop_map(|s| Piece::Single(s.to_string())),
        2 => proptest::collection::vec(stem(), 2..5).prop_map(Piece::Beam),
        2 => proptest::strategy::Just(Piece::Carry),
    ]
}

/// A valid token sequence: first token is never a carry, beams balanced.
pub fn valid_tokens() -> impl Strategy<Value = Vec<String>> {
    (stem(), proptest::collection::vec(piece(), 0..25)).prop_map(|(first, rest)| {
        let mut out = vec![first];
        for p in rest {
            match p {
                Piece::Single(s) => out.push(s),
                Piece::Carry => out.push("-".to_string()),
                Piece::Beam(group) => {
                    let last = group.len() - 1;
                    for (i, t) in group.into_iter().enumerate() {
                        out.push(match i {
                            0 => format!("{t}_"),
                            i if i == last => format!("_{t}"),
                            _ => t,
                        });
                    }
                }
            }
        }
        out
    })
}

/// Draws `n` values from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("value").current())
        .collect()
}

/// Lays tokens out as a one-system source with a grip under every column.
pub fn source_for_tokens(tokens: &[String]) -> String {
    let mut t = String::from("T     ");
    let mut v = String::from("VOX v ");
    for tok in tokens {
        let col = t.chars().count();
        t.push_str(tok);
        t.push(' ');
        while v.chars().count() < col {
            v.push(' ');
        }
        v.push('a');
    }
    format!(
        "Tab = ( (1 a) )\nduratioManet = est\nPARS p\nbünde = Tab\n{}\n{}\n",
        t.trim_end(),
        v
    )
}
