//! Route knowledge base: a single-file, line-delimited store of computed
//! routes keyed by a content hash of the scenario (canonical topology text,
//! demand, thresholds, and non-seed GA configuration), so a recurring
//! scenario is answered from storage.
//!
//! Store line format:
//!
//! ```text
//! kb <key-hash> <route nodes space-separated> <bottleneck> <hop_count> <iso-timestamp>
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use sha2::{Digest, Sha256};

use crate::error::KbError;
use crate::ga::{GaConfig, RouteResult};
use crate::grading::QosThresholds;
use crate::path_enum::Chromosome;
use crate::scalar::Scalar;
use crate::topology::{Demand, NodeId, Topology};

/// Content hash identifying a routing scenario. The RNG seed is excluded:
/// any successful run may answer a recurring scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioKey(String);

impl ScenarioKey {
    pub fn as_hex(&self) -> &str {
        &self.0
    }
}

/// Builds the scenario key from canonical forms of every route-determining
/// input. Any change to the topology, demand, thresholds, hop bound or
/// non-seed configuration changes the key.
pub fn scenario_key<S: Scalar>(
    topo: &Topology<S>,
    demand: &Demand<S>,
    thresholds: &QosThresholds<S>,
    config: &GaConfig<S>,
    max_hops: usize,
) -> ScenarioKey {
    let mut hasher = Sha256::new();
    hasher.update(topo.to_file_string().as_bytes());
    let canon = format!(
        "demand {} {} {} {}\nthresholds {} {} {}\nconfig {} {} {} {} {} {} {:?} {}\n",
        demand.source,
        demand.destination,
        demand.required_bandwidth,
        demand.message_size,
        thresholds.delay_max,
        thresholds.jitter_max,
        thresholds.loss_max,
        config.population_size,
        config.initial_candidates,
        config.generations,
        config.crossover_rate,
        config.mutation_rate,
        config.selection_floor,
        config.crossover,
        max_hops,
    );
    hasher.update(canon.as_bytes());
    let digest = hasher.finalize();
    ScenarioKey(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// One stored route.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeEntry<S: Scalar = f64> {
    pub key: ScenarioKey,
    pub path: Chromosome,
    pub bottleneck: S,
    pub hop_count: usize,
    pub created_at: DateTime<Utc>,
}

/// A line that failed to parse, reported alongside lookups and otherwise
/// treated as a miss.
#[derive(Debug, Clone, PartialEq)]
pub struct KbWarning {
    pub line: usize,
    pub message: String,
}

/// File-backed store. Writes are atomic (temp file + rename); a missing file
/// is an empty store.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    path: PathBuf,
}

impl KnowledgeBase {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        KnowledgeBase { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Reads every well-formed entry, collecting warnings for corrupt lines.
    pub fn scan<S: Scalar>(&self) -> Result<(Vec<KnowledgeEntry<S>>, Vec<KbWarning>), KbError> {
        let text = match fs::read_to_string(&self.path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), Vec::new())),
            Err(e) => return Err(e.into()),
        };
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            match parse_line::<S>(line) {
                Ok(entry) => entries.push(entry),
                Err(message) => warnings.push(KbWarning {
                    line: line_no,
                    message,
                }),
            }
        }
        Ok((entries, warnings))
    }

    /// Returns the stored entry for the key, if any, along with warnings for
    /// any corrupt lines encountered (corrupt lines never match).
    pub fn lookup<S: Scalar>(
        &self,
        key: &ScenarioKey,
    ) -> Result<(Option<KnowledgeEntry<S>>, Vec<KbWarning>), KbError> {
        let (entries, warnings) = self.scan::<S>()?;
        Ok((entries.into_iter().find(|e| &e.key == key), warnings))
    }

    /// Inserts or replaces the entry for its key (last write wins). The
    /// route must be feasible: a non-positive bottleneck is rejected.
    pub fn store<S: Scalar>(&self, entry: &KnowledgeEntry<S>) -> Result<(), KbError> {
        if entry.bottleneck <= S::zero() {
            return Err(KbError::InfeasibleRoute);
        }
        let (mut entries, _) = self.scan::<S>()?;
        entries.retain(|e| e.key != entry.key);
        entries.push(entry.clone());

        let mut text = String::new();
        for e in &entries {
            text.push_str(&format!(
                "kb {} {} {} {} {}\n",
                e.key.as_hex(),
                e.path,
                e.bottleneck,
                e.hop_count,
                e.created_at.to_rfc3339_opts(SecondsFormat::Secs, true)
            ));
        }
        let dir = self.path.parent().filter(|p| !p.as_os_str().is_empty());
        let tmp = self
            .path
            .with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        if let Some(dir) = dir {
            // Best effort: make the rename durable.
            let _ = fs::File::open(dir).and_then(|d| d.sync_all());
        }
        Ok(())
    }

    /// Convenience: builds an entry from a route result and stores it.
    pub fn store_route<S: Scalar>(
        &self,
        key: &ScenarioKey,
        route: &RouteResult<S>,
    ) -> Result<KnowledgeEntry<S>, KbError> {
        let entry = KnowledgeEntry {
            key: key.clone(),
            path: route.path.clone(),
            bottleneck: route.bottleneck,
            hop_count: route.hop_count,
            created_at: Utc::now(),
        };
        self.store(&entry)?;
        Ok(entry)
    }
}

fn parse_line<S: Scalar>(line: &str) -> Result<KnowledgeEntry<S>, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 6 || tokens[0] != "kb" {
        return Err("expected `kb <key> <nodes...> <bottleneck> <hops> <timestamp>`".into());
    }
    let key = ScenarioKey(tokens[1].to_string());
    let timestamp = tokens[tokens.len() - 1];
    let created_at = DateTime::parse_from_rfc3339(timestamp)
        .map_err(|e| format!("bad timestamp `{timestamp}`: {e}"))?
        .with_timezone(&Utc);
    let hop_count: usize = tokens[tokens.len() - 2]
        .parse()
        .map_err(|_| format!("bad hop count `{}`", tokens[tokens.len() - 2]))?;
    let bottleneck: S = tokens[tokens.len() - 3]
        .parse()
        .map_err(|_| format!("bad bottleneck `{}`", tokens[tokens.len() - 3]))?;
    let node_tokens = &tokens[2..tokens.len() - 3];
    if node_tokens.len() != hop_count + 1 {
        return Err(format!(
            "route has {} nodes but hop count {}",
            node_tokens.len(),
            hop_count
        ));
    }
    let mut nodes = Vec::with_capacity(node_tokens.len());
    for t in node_tokens {
        nodes.push(NodeId(t.parse::<usize>().map_err(|_| format!("bad node id `{t}`"))?));
    }
    Ok(KnowledgeEntry {
        key,
        path: Chromosome::from_nodes(nodes),
        bottleneck,
        hop_count,
        created_at,
    })
}
