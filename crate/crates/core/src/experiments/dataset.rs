//! Sentence-pair similarity data: `Subject Verb Object and Subject* does too`.
//!
//! The loader reads tab-separated rows. With a header, columns are found by
//! name:
//!
//! - either `subject1 verb1 object1 subject1_star subject2 verb2 object2 subject2_star`
//!   or `sentence1 sentence2` holding whole sentences
//! - `score` (required), and optionally `participant`, `band` and `source`
//!
//! Without a header the layout is positional: `sentence1 sentence2 score` for
//! averaged data or `sentence1 sentence2 participant score` for
//! participant-level rows. Rows describing the same sentence pair are averaged,
//! keeping first-appearance order.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::ExperimentError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    High,
    Medium,
    Low,
    Unknown,
}

impl FromStr for Band {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "high" => Band::High,
            "medium" | "med" => Band::Medium,
            "low" => Band::Low,
            _ => Band::Unknown,
        })
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::High => "HIGH",
            Band::Medium => "MEDIUM",
            Band::Low => "LOW",
            Band::Unknown => "unknown",
        })
    }
}

/// `subject verb object` plus the subject of the elided `does too` clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half {
    pub subject: String,
    pub verb: String,
    pub object: String,
    pub subject_star: String,
}

impl Half {
    pub fn new(subject: &str, verb: &str, object: &str, subject_star: &str) -> Self {
        Half {
            subject: subject.to_lowercase(),
            verb: verb.to_lowercase(),
            object: object.to_lowercase(),
            subject_star: subject_star.to_lowercase(),
        }
    }

    /// Parses `S V O [and] S* [does too]`.
    pub fn parse_sentence(text: &str) -> Option<Self> {
        let words: Vec<&str> = text
            .split_whitespace()
            .map(|w| w.trim_matches(|c: char| c.is_ascii_punctuation()))
            .filter(|w| !w.is_empty())
            .collect();
        let core: Vec<&str> = match words.as_slice() {
            [s, v, o, "and", ss, rest @ ..] | [s, v, o, ss, rest @ ..] if matches_tail(rest) => vec![s, v, o, ss],
            _ => return None,
        };
        Some(Half::new(core[0], core[1], core[2], core[3]))
    }
}

fn matches_tail(rest: &[&str]) -> bool {
    matches!(rest, [] | ["does", "too"] | ["do", "too"])
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} and {} does too",
            self.subject, self.verb, self.object, self.subject_star
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityRecord {
    pub first: Half,
    pub second: Half,
    /// Mean annotation on the 1–7 scale.
    pub human_score: f64,
    pub band: Band,
    /// Source pair for grouping, when the file names one.
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub records: Vec<SimilarityRecord>,
}

#[derive(Clone, Copy)]
struct Columns {
    halves: Layout,
    score: usize,
    participant: Option<usize>,
    band: Option<usize>,
    source: Option<usize>,
}

#[derive(Clone, Copy)]
enum Layout {
    Sentences(usize, usize),
    Words([usize; 8]),
}

const WORD_COLUMNS: [&str; 8] = [
    "subject1",
    "verb1",
    "object1",
    "subject1_star",
    "subject2",
    "verb2",
    "object2",
    "subject2_star",
];

fn header_columns(header: &[&str]) -> Option<Columns> {
    let find = |name: &str| header.iter().position(|h| h.eq_ignore_ascii_case(name));
    let score = find("score")?;
    let halves = match (find("sentence1"), find("sentence2")) {
        (Some(a), Some(b)) => Layout::Sentences(a, b),
        _ => {
            let mut idx = [0; 8];
            for (slot, name) in idx.iter_mut().zip(WORD_COLUMNS) {
                *slot = find(name)?;
            }
            Layout::Words(idx)
        }
    };
    Some(Columns {
        halves,
        score,
        participant: find("participant"),
        band: find("band"),
        source: find("source"),
    })
}

struct Acc {
    first: Half,
    second: Half,
    sum: f64,
    n: usize,
    band: Band,
    source: Option<String>,
}

impl Dataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Dataset::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
            .peekable();
        let first: Vec<&str> = match lines.peek() {
            Some((_, l)) => l.split('\t').map(str::trim).collect(),
            None => return Ok(Dataset { records: Vec::new() }),
        };
        let named = header_columns(&first);
        if named.is_some() {
            lines.next();
        }

        let mut order: Vec<Acc> = Vec::new();
        let mut index: HashMap<(Half, Half), usize> = HashMap::new();
        for (line, raw) in lines {
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let bad = |msg: String| ExperimentError::Dataset { line, msg };
            let cols_spec = match &named {
                Some(c) => *c,
                None => match cols.len() {
                    3 => Columns {
                        halves: Layout::Sentences(0, 1),
                        score: 2,
                        participant: None,
                        band: None,
                        source: None,
                    },
                    4 => Columns {
                        halves: Layout::Sentences(0, 1),
                        score: 3,
                        participant: Some(2),
                        band: None,
                        source: None,
                    },
                    n => return Err(bad(format!("expected 3 or 4 columns without a header, found {n}"))),
                },
            };
            let col = |i: usize| cols.get(i).copied().ok_or_else(|| bad(format!("missing column {}", i + 1)));
            let (a, b) = match cols_spec.halves {
                Layout::Sentences(i, j) => {
                    let parse = |t: &str| {
                        Half::parse_sentence(t).ok_or_else(|| bad(format!("cannot read sentence `{t}`")))
                    };
                    (parse(col(i)?)?, parse(col(j)?)?)
                }
                Layout::Words(idx) => {
                    let w = idx.iter().map(|&i| col(i)).collect::<Result<Vec<_>, _>>()?;
                    (Half::new(w[0], w[1], w[2], w[3]), Half::new(w[4], w[5], w[6], w[7]))
                }
            };
            let score: f64 = col(cols_spec.score)?
                .parse()
                .map_err(|_| bad(format!("score `{}` is not a number", cols[cols_spec.score])))?;
            if !(1.0..=7.0).contains(&score) {
                return Err(bad(format!("score {score} is outside 1..=7")));
            }
            if let Some(p) = cols_spec.participant {
                col(p)?;
            }
            let band = match cols_spec.band {
                Some(i) => col(i)?.parse().unwrap_or(Band::Unknown),
                None => Band::Unknown,
            };
            let source = match cols_spec.source {
                Some(i) => Some(col(i)?.to_string()),
                None => None,
            };
            let key = (a.clone(), b.clone());
            match index.get(&key) {
                Some(&k) => {
                    order[k].sum += score;
                    order[k].n += 1;
                }
                None => {
                    index.insert(key, order.len());
                    order.push(Acc {
                        first: a,
                        second: b,
                        sum: score,
                        n: 1,
                        band,
                        source,
                    });
                }
            }
        }
        let records = order
            .into_iter()
            .map(|a| SimilarityRecord {
                first: a.first,
                second: a.second,
                human_score: a.sum / a.n as f64,
                band: a.band,
                source: a.source,
            })
            .collect();
        Ok(Dataset { records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn human_scores(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.human_score).collect()
    }

    /// Record indices grouped for the t-test, in first-appearance order.
    pub fn groups(&self, grouping: Grouping) -> Vec<Vec<usize>> {
        let mut keys: Vec<String> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, r) in self.records.iter().enumerate() {
            let key = match grouping {
                Grouping::FirstSentence => r.first.to_string(),
                Grouping::Ml2010 => r.source.clone().unwrap_or_else(|| {
                    let (a, b) = (&r.first.verb, &r.second.verb);
                    if a <= b {
                        format!("{a}|{b}")
                    } else {
                        format!("{b}|{a}")
                    }
                }),
            };
            match keys.iter().position(|k| *k == key) {
                Some(g) => groups[g].push(i),
                None => {
                    keys.push(key);
                    groups.push(vec![i]);
                }
            }
        }
        groups
    }

    /// Every pair of records sharing a first sentence, as `(i, j)` with `i < j`.
    pub fn derived_triplets(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for group in self.groups(Grouping::FirstSentence) {
            for (a, &i) in group.iter().enumerate() {
                for &j in &group[a + 1..] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Reads `sentence1 sentence2 sentence3` rows and resolves each to the
    /// records for pairs (1,2) and (1,3).
    pub fn parse_triplets(&self, text: &str) -> Result<Vec<(usize, usize)>, ExperimentError> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let bad = |msg: String| ExperimentError::Dataset { line, msg };
            if cols.len() != 3 {
                if line == 1 {
                    continue; // header
                }
                return Err(bad(format!("expected 3 sentences, found {}", cols.len())));
            }
            let halves = cols
                .iter()
                .map(|c| Half::parse_sentence(c))
                .collect::<Option<Vec<_>>>();
            let Some(h) = halves else {
                if line == 1 {
                    continue;
                }
                return Err(bad("cannot read sentences".into()));
            };
            let find = |a: &Half, b: &Half| {
                self.records
                    .iter()
                    .position(|r| (&r.first, &r.second) == (a, b) || (&r.first, &r.second) == (b, a))
                    .ok_or_else(|| bad(format!("no record for the pair `{a}` / `{b}`")))
            };
            out.push((find(&h[0], &h[1])?, find(&h[0], &h[2])?));
        }
        Ok(out)
    }

    pub fn load_triplets(&self, path: impl AsRef<Path>) -> Result<Vec<(usize, usize)>, ExperimentError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.parse_triplets(&text)
    }
}

/// How sentence pairs are grouped for the t-test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Grouping {
    /// All pairs sharing the same first sentence.
    #[default]
    FirstSentence,
    /// The `source` column, or the unordered verb pair when absent.
    Ml2010,
}

impl FromStr for Grouping {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first-sentence" | "sentence1" => Ok(Grouping::FirstSentence),
            "ml2010" => Ok(Grouping::Ml2010),
            other => Err(ExperimentError::Config(format!(
                "unknown grouping `{other}` (expected first-sentence or ml2010)"
            ))),
        }
    }
}
