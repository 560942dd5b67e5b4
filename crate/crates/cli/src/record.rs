//! Result records and the append-only JSONL store.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ehrhart_core::hstar::{hstar_from_ehrhart, HStarVector, PropertyFlags};
use ehrhart_core::polynomial::RationalPolynomial;
use ehrhart_core::poset::PosetJson;
use ehrhart_core::{EhrhartComputation, EvaluationPoint, Partition, Permutation, WeightVector};
use serde::{Deserialize, Serialize};

/// What was computed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InputDescriptor {
    Gt {
        lambda: Partition,
        mu: Partition,
        weight: WeightVector,
    },
    Poset {
        spec: String,
        poset: PosetJson,
    },
    Permutation {
        permutation: Permutation,
    },
    Birkhoff {
        ell: u32,
    },
}

impl InputDescriptor {
    /// Stable identity used by the store index.
    pub fn key(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }
}

/// A self-contained result: the polynomial can be re-checked against the
/// stored transcript without recomputing anything.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub input: InputDescriptor,
    pub dimension: usize,
    /// Coefficients of `L(n)` from the constant term up, as `"p/q"`.
    pub ehrhart: Vec<String>,
    pub hstar: Option<HStarVector>,
    pub flags: Option<PropertyFlags>,
    pub transcript: Vec<EvaluationPoint>,
    pub verified: bool,
    pub engine_version: String,
    pub duration_ms: f64,
}

impl ResultRecord {
    pub fn new(
        input: InputDescriptor,
        comp: &EhrhartComputation,
        with_hstar: bool,
        verified: bool,
        duration_ms: f64,
    ) -> ehrhart_core::Result<Self> {
        let (hstar, flags) = if with_hstar {
            let h = hstar_from_ehrhart(&comp.polynomial)?;
            let f = PropertyFlags::compute(&comp.polynomial, &h)?;
            (Some(h), Some(f))
        } else {
            (None, None)
        };
        Ok(ResultRecord {
            input,
            dimension: comp.dimension,
            ehrhart: comp.polynomial.to_rational_strings(),
            hstar,
            flags,
            transcript: comp.transcript.clone(),
            verified,
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_ms,
        })
    }

    pub fn polynomial(&self) -> ehrhart_core::Result<RationalPolynomial> {
        RationalPolynomial::from_rational_strings(&self.ehrhart)
    }

    /// Checks the stored polynomial against the stored transcript, and the
    /// stored h*-vector against the polynomial.
    pub fn reverify(&self) -> bool {
        let Ok(poly) = self.polynomial() else { return false };
        if poly.degree() != Some(self.dimension) {
            return false;
        }
        if !ehrhart_core::ehrhart::transcript_matches(&poly, &self.transcript) {
            return false;
        }
        match &self.hstar {
            Some(h) => hstar_from_ehrhart(&poly).is_ok_and(|g| &g == h),
            None => true,
        }
    }
}

/// Line-delimited JSON file of [`ResultRecord`]s, opened for appending.
pub struct Store {
    path: PathBuf,
    writer: BufWriter<File>,
    seen: HashSet<String>,
}

impl Store {
    /// Opens (creating if needed) the store and indexes the inputs already
    /// present. A truncated final line, left by an interrupted run, is
    /// ignored and overwritten by the next append.
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut seen = HashSet::new();
        let mut valid_len = 0u64;
        if path.exists() {
            let bytes = std::fs::read(path)?;
            let lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
            for (i, line) in lines.iter().enumerate() {
                if line.iter().all(u8::is_ascii_whitespace) {
                    valid_len += line.len() as u64 + 1;
                    continue;
                }
                match serde_json::from_slice::<ResultRecord>(line) {
                    Ok(rec) => {
                        seen.insert(rec.input.key());
                        valid_len += line.len() as u64 + 1;
                    }
                    // only an unterminated last line may be discarded
                    Err(_) if i + 1 == lines.len() => break,
                    Err(e) => {
                        return Err(std::io::Error::new(
                            std::io::ErrorKind::InvalidData,
                            format!("{}: line {}: {e}", path.display(), i + 1),
                        ))
                    }
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        if file.metadata()?.len() > valid_len {
            file.set_len(valid_len)?;
        }
        Ok(Store {
            path: path.to_path_buf(),
            writer: BufWriter::new(file),
            seen,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn contains(&self, input: &InputDescriptor) -> bool {
        self.seen.contains(&input.key())
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    /// Appends unless the input is already stored; returns whether it wrote.
    pub fn append(&mut self, rec: &ResultRecord) -> std::io::Result<bool> {
        if !self.seen.insert(rec.input.key()) {
            return Ok(false);
        }
        serde_json::to_writer(&mut self.writer, rec)?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        Ok(true)
    }
}

/// Reads every record of a store file.
pub fn read_store(path: &Path) -> std::io::Result<Vec<ResultRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ehrhart_core::{gt_ehrhart, GTChainSpec, SkewShape};

    fn record() -> ResultRecord {
        let lambda: Partition = "3,2,1".parse().unwrap();
        let weight: WeightVector = "1^6".parse().unwrap();
        let spec = GTChainSpec::new(SkewShape::straight(lambda.clone()), weight.clone());
        let comp = gt_ehrhart(&spec, true).unwrap();
        let input = InputDescriptor::Gt {
            lambda,
            mu: Partition::empty(),
            weight,
        };
        ResultRecord::new(input, &comp, true, true, 1.25).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let rec = record();
        let text = serde_json::to_string(&rec).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        assert!(back.reverify());
        assert!(text.contains(r#""family":"gt""#));
    }

    #[test]
    fn tampering_is_detected() {
        let mut rec = record();
        rec.ehrhart[1] = "5/7".into();
        assert!(!rec.reverify());
        let mut rec = record();
        rec.transcript[2].value += 1;
        assert!(!rec.reverify());
    }

    #[test]
    fn store_deduplicates_and_recovers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        let rec = record();
        {
            let mut s = Store::open(&path).unwrap();
            assert!(s.append(&rec).unwrap());
            assert!(!s.append(&rec).unwrap());
        }
        // simulate an interrupted write
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"input\":").unwrap();
        drop(f);
        let s = Store::open(&path).unwrap();
        assert!(s.contains(&rec.input));
        assert_eq!(s.len(), 1);
        drop(s);
        assert_eq!(read_store(&path).unwrap(), vec![rec]);
    }
}
