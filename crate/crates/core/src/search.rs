//! Bounded exhaustive search for distinct multisets sharing a k-sum multiset.
//!
//! Candidates come from a deterministic stream (see [`enumerate_candidates`]).
//! The stream is cut into fixed-size chunks; each chunk maps its candidates
//! to a 64-bit digest of their sorted k-sums. Digests only pre-bucket: every
//! bucket with two or more members is regrouped by the exact sum lists
//! before any pair is reported. Completed chunks can be appended to a
//! checkpoint file and skipped on resume.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::algebra::{rat, Rational};
use crate::elimination::residual_relations;
use crate::error::{Error, Result};
use crate::multiset::{integralizing_scale, ksums, power_sum_vector, NumberMultiset, SumMultiset};

const DEFAULT_CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub k: usize,
    /// Largest absolute value (symmetric mode) or largest entry (general mode).
    pub bound: u32,
    /// Only negation-symmetric multisets `{±x_1, ..., ±x_(n/2)}`.
    pub symmetric_only: bool,
    /// Collapse records related by a simultaneous shift, scaling or reflection.
    pub dedupe_affine: bool,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::BadSpec(format!("need 1 <= k <= n, got k = {}, n = {}", self.k, self.n)));
        }
        if self.symmetric_only && !self.n.is_multiple_of(2) {
            return Err(Error::BadSpec(format!("symmetric search needs even n, got {}", self.n)));
        }
        Ok(())
    }

    fn fingerprint(&self, chunk_size: usize) -> String {
        format!(
            "# ksumlab-search n={} k={} bound={} symmetric={} chunk={}",
            self.n, self.k, self.bound, self.symmetric_only, chunk_size
        )
    }
}

/// Candidates as integer vectors together with the common denominator that
/// turns them back into the emitted rational multisets.
struct CandidateSet {
    values: Vec<Vec<i64>>,
    denominator: i64,
}

impl CandidateSet {
    fn build(spec: &SearchSpec) -> CandidateSet {
        let bound = spec.bound as i64;
        if spec.symmetric_only {
            let values = (0..=bound)
                .combinations_with_replacement(spec.n / 2)
                .map(|half| {
                    let mut v: Vec<i64> = half.iter().flat_map(|&x| [-x, x]).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            return CandidateSet { values, denominator: 1 };
        }
        // Nondecreasing tuples with minimum 0 cover every translation class
        // once; centring multiplies through by n to stay integral.
        let n = spec.n as i64;
        let values = (0..=bound)
            .combinations_with_replacement(spec.n - 1)
            .map(|rest| {
                let total: i64 = rest.iter().sum();
                std::iter::once(0)
                    .chain(rest)
                    .map(|x| n * x - total)
                    .collect()
            })
            .collect();
        CandidateSet { values, denominator: n }
    }

    fn multiset(&self, index: usize) -> NumberMultiset {
        let elements = self.values[index]
            .iter()
            .map(|&x| Rational::new(x.into(), self.denominator.into()))
            .collect();
        NumberMultiset::new(elements).expect("candidates are nonempty")
    }
}

/// The deterministic candidate stream.
///
/// Symmetric mode: every multiset of `n/2` values from `0..=bound`, expanded
/// into `±x` pairs (a zero contributes `0, 0`). General mode: every
/// nondecreasing `n`-tuple from `0..=bound`, shifted so that `S1 = 0`, one
/// per translation class.
pub fn enumerate_candidates(spec: &SearchSpec) -> Result<impl Iterator<Item = NumberMultiset>> {
    spec.validate()?;
    let set = CandidateSet::build(spec);
    Ok((0..set.values.len()).map(move |i| set.multiset(i)))
}

fn integer_ksums(values: &[i64], k: usize) -> Vec<i64> {
    let mut sums: Vec<i64> = values
        .iter()
        .combinations(k)
        .map(|c| c.into_iter().sum())
        .collect();
    sums.sort_unstable();
    sums
}

fn digest(sums: &[i64]) -> u64 {
    let mut hasher = Sha256::new();
    for s in sums {
        hasher.update(s.to_le_bytes());
    }
    let out = hasher.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("sha256 output is 32 bytes"))
}

/// Two distinct multisets with identical k-sum multisets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionRecord {
    pub first: NumberMultiset,
    pub second: NumberMultiset,
    pub k: usize,
    pub canonical_sums: SumMultiset,
}

impl CollisionRecord {
    pub fn new(first: NumberMultiset, second: NumberMultiset, k: usize) -> Result<Self> {
        let canonical_sums = ksums(&first, k)?;
        Ok(CollisionRecord { first, second, k, canonical_sums })
    }

    /// The representative of this pair's orbit under simultaneous shift,
    /// positive scaling and reflection: the members are centred, scaled to
    /// coprime integers, reflected if that makes the pair lexicographically
    /// smaller, and ordered.
    pub fn canonical(&self) -> CollisionRecord {
        let n = rat(self.first.len() as i64);
        let shift = -(self.first.sum() / n);
        let centred: Vec<Rational> = self
            .first
            .elements()
            .iter()
            .chain(self.second.elements())
            .map(|x| x + &shift)
            .collect();
        let scale = integralizing_scale(&centred);
        let order = |a: NumberMultiset, b: NumberMultiset| if a <= b { (a, b) } else { (b, a) };
        let plain = order(self.first.affine(&scale, &(&shift * &scale)), self.second.affine(&scale, &(&shift * &scale)));
        let reflected = order(plain.0.negated(), plain.1.negated());
        let (first, second) = if reflected < plain { reflected } else { plain };
        CollisionRecord::new(first, second, self.k).expect("k was valid for the original record")
    }
}

/// Recomputes both k-sum multisets and compares them with each other and
/// with the stored sums. For `(n, k) = (12, 4)` also requires the residual
/// relations of both (centred) members to vanish.
pub fn verify_record(r: &CollisionRecord) -> bool {
    if r.first == r.second || r.first.len() != r.second.len() {
        return false;
    }
    let (Ok(x), Ok(y)) = (ksums(&r.first, r.k), ksums(&r.second, r.k)) else {
        return false;
    };
    if x != y || x != r.canonical_sums {
        return false;
    }
    if (r.first.len(), r.k) == (12, 4) {
        for member in [&r.first, &r.second] {
            let shift = -(member.sum() / rat(12));
            let centred = member.affine(&rat(1), &shift);
            let sv = power_sum_vector(&centred, 12);
            if sv.get(2).is_zero() {
                continue;
            }
            match residual_relations(&sv, 26) {
                Ok(res) if res.iter().all(|r| r.value.is_zero()) => {}
                _ => return false,
            }
        }
    }
    true
}

/// Runs a search with explicit worker count, chunking and checkpointing.
#[derive(Clone, Debug)]
pub struct Searcher {
    spec: SearchSpec,
    workers: usize,
    chunk_size: usize,
    checkpoint: Option<PathBuf>,
}

impl Searcher {
    pub fn new(spec: SearchSpec) -> Self {
        Searcher { spec, workers: 0, chunk_size: DEFAULT_CHUNK, checkpoint: None }
    }

    /// Number of worker threads; 0 lets rayon decide.
    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size.max(1);
        self
    }

    /// Appends one line per completed chunk to `path`, resuming from
    /// whatever the file already holds.
    pub fn checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn run(&self) -> Result<Vec<CollisionRecord>> {
        self.spec.validate()?;
        let set = CandidateSet::build(&self.spec);
        let chunk_count = set.values.len().div_ceil(self.chunk_size);
        let fingerprint = self.spec.fingerprint(self.chunk_size);

        let mut done: BTreeMap<usize, Vec<(u64, usize)>> = BTreeMap::new();
        let mut sink = None;
        if let Some(path) = &self.checkpoint {
            done = read_checkpoint(path, &fingerprint, |id| self.chunk_len(id, set.values.len()))?;
            sink = Some(Mutex::new(open_checkpoint(path, &fingerprint)?));
        }

        let todo: Vec<usize> = (0..chunk_count).filter(|id| !done.contains_key(id)).collect();
        let work = |id: usize| -> Result<(usize, Vec<(u64, usize)>)> {
            let start = id * self.chunk_size;
            let end = (start + self.chunk_size).min(set.values.len());
            let entries: Vec<(u64, usize)> = (start..end)
                .map(|i| (digest(&integer_ksums(&set.values[i], self.spec.k)), i))
                .collect();
            if let Some(sink) = &sink {
                let line = format_checkpoint_line(id, &entries);
                let mut file = sink.lock().unwrap();
                file.write_all(line.as_bytes())?;
                file.flush()?;
            }
            Ok((id, entries))
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::BadSpec(format!("thread pool: {e}")))?;
        let fresh: Vec<(usize, Vec<(u64, usize)>)> =
            pool.install(|| todo.par_iter().map(|&id| work(id)).collect::<Result<_>>())?;
        done.extend(fresh);

        let mut keyed: Vec<(u64, usize)> = done.into_values().flatten().collect();
        keyed.sort_unstable();

        let mut records = Vec::new();
        for (_, bucket) in &keyed.into_iter().chunk_by(|&(h, _)| h) {
            let members: Vec<usize> = bucket.map(|(_, i)| i).collect();
            if members.len() < 2 {
                continue;
            }
            let mut exact: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
            for i in members {
                exact.entry(integer_ksums(&set.values[i], self.spec.k)).or_default().push(i);
            }
            for group in exact.values() {
                for (&i, &j) in group.iter().tuple_combinations() {
                    records.push(CollisionRecord::new(set.multiset(i), set.multiset(j), self.spec.k)?);
                }
            }
        }
        if self.spec.dedupe_affine {
            records = dedupe_affine(records);
        }
        records.sort_by(|a, b| (&a.first, &a.second).cmp(&(&b.first, &b.second)));
        Ok(records)
    }

    fn chunk_len(&self, id: usize, total: usize) -> Option<usize> {
        let start = id.checked_mul(self.chunk_size)?;
        (start < total).then(|| (total - start).min(self.chunk_size))
    }
}

/// Replaces each record by its canonical pair and keeps one per orbit.
pub fn dedupe_affine(records: Vec<CollisionRecord>) -> Vec<CollisionRecord> {
    let mut seen: BTreeMap<(NumberMultiset, NumberMultiset), CollisionRecord> = BTreeMap::new();
    for r in records {
        let c = r.canonical();
        seen.entry((c.first.clone(), c.second.clone())).or_insert(c);
    }
    seen.into_values().collect()
}

/// All collision records for `spec`, using every available core.
pub fn find_collisions(spec: &SearchSpec) -> Result<Vec<CollisionRecord>> {
    Searcher::new(spec.clone()).run()
}

fn format_checkpoint_line(id: usize, entries: &[(u64, usize)]) -> String {
    let body = entries.iter().map(|(h, i)| format!("{h:016x}:{i}")).join(" ");
    format!("{id} {} {body}\n", entries.len())
}

fn read_checkpoint(
    path: &Path,
    fingerprint: &str,
    expected_len: impl Fn(usize) -> Option<usize>,
) -> Result<BTreeMap<usize, Vec<(u64, usize)>>> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    let mut lines = BufReader::new(file).lines();
    match lines.next().transpose()? {
        None => return Ok(done),
        Some(header) if header == fingerprint => {}
        Some(header) => {
            return Err(Error::Checkpoint(format!(
                "{} was written for a different search ({header})",
                path.display()
            )))
        }
    }
    for line in lines {
        // A torn final line from an interrupted run is simply redone.
        if let Some((id, entries)) = parse_checkpoint_line(&line?) {
            if expected_len(id) == Some(entries.len()) {
                done.insert(id, entries);
            }
        }
    }
    Ok(done)
}

fn parse_checkpoint_line(line: &str) -> Option<(usize, Vec<(u64, usize)>)> {
    let mut fields = line.split_whitespace();
    let id: usize = fields.next()?.parse().ok()?;
    let count: usize = fields.next()?.parse().ok()?;
    let entries: Vec<(u64, usize)> = fields
        .map(|f| {
            let (h, i) = f.split_once(':')?;
            Some((u64::from_str_radix(h, 16).ok()?, i.parse().ok()?))
        })
        .collect::<Option<_>>()?;
    (entries.len() == count).then_some((id, entries))
}

fn open_checkpoint(path: &Path, fingerprint: &str) -> Result<File> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(file, "{fingerprint}")?;
    }
    Ok(file)
}
