//! Directory-based evaluation of separated estimates against references.
//!
//! A scene is a set of mono WAV files. Two layouts are accepted: a flat
//! directory holding one scene, or a directory of subdirectories holding one
//! scene each. Scenes pair by sorted name, sources within a scene by sorted
//! filename; since scoring uses the optimal matching, the within-scene file
//! order never affects the result.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::{auc_sdr, optimal_perm_si_sdr};
use crate::signal::{Signal, SourceSet};
use crate::wav::load_wav;

/// Per-scene scores.
#[derive(Clone, Debug)]
pub struct SceneScore {
    pub scene: String,
    pub n_sources: usize,
    pub opt_perm_si_sdr: f64,
    pub auc_sdr: f64,
}

/// Scores for every scene plus corpus means.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub scenes: Vec<SceneScore>,
    pub mean_si_sdr: f64,
    pub mean_auc: f64,
}

/// Evaluation knobs.
#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    /// Remove each signal's mean before scoring, for compatibility with
    /// SI-SDR definitions that center their inputs.
    pub zero_mean: bool,
}

/// Lengths within a scene may differ by at most this fraction before
/// truncation to the shortest is considered an error.
const LENGTH_TOLERANCE: f64 = 0.01;

fn sorted_wavs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .map(|e| e.eq_ignore_ascii_case("wav"))
                    .unwrap_or(false)
        })
        .collect();
    files.sort();
    Ok(files)
}

fn sorted_subdirs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs)
}

/// One scene per subdirectory when subdirectories exist, otherwise the
/// directory itself is the single scene.
fn discover_scenes(dir: &Path) -> Result<Vec<(String, Vec<PathBuf>)>> {
    let subdirs = sorted_subdirs(dir)?;
    let mut scenes = Vec::new();
    if subdirs.is_empty() {
        let files = sorted_wavs(dir)?;
        if !files.is_empty() {
            scenes.push((".".to_string(), files));
        }
    } else {
        for sub in subdirs {
            let files = sorted_wavs(&sub)?;
            if !files.is_empty() {
                let name = sub
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| ".".into());
                scenes.push((name, files));
            }
        }
    }
    if scenes.is_empty() {
        return Err(Error::NoScenes(dir.to_path_buf()));
    }
    Ok(scenes)
}

fn load_scene(paths: &[PathBuf], options: EvalOptions) -> Result<Vec<Signal>> {
    let mut signals = Vec::with_capacity(paths.len());
    for path in paths {
        let asset = load_wav(path)?;
        let signal = if options.zero_mean {
            asset.signal.zero_mean()
        } else {
            asset.signal
        };
        signals.push(signal);
    }
    Ok(signals)
}

fn truncate_to_common(
    scene: &str,
    mut refs: Vec<Signal>,
    mut ests: Vec<Signal>,
) -> Result<(SourceSet, SourceSet)> {
    let min = refs
        .iter()
        .chain(&ests)
        .map(Signal::len)
        .min()
        .expect("scene cannot be empty");
    let max = refs
        .iter()
        .chain(&ests)
        .map(Signal::len)
        .max()
        .expect("scene cannot be empty");
    if (max - min) as f64 > LENGTH_TOLERANCE * max as f64 {
        return Err(Error::SceneLengthSpread {
            scene: scene.to_string(),
            min,
            max,
        });
    }
    if max != min {
        refs = refs
            .into_iter()
            .map(|s| s.truncated(min))
            .collect::<Result<_>>()?;
        ests = ests
            .into_iter()
            .map(|s| s.truncated(min))
            .collect::<Result<_>>()?;
    }
    Ok((SourceSet::new(refs)?, SourceSet::new(ests)?))
}

/// Scores every estimate scene against its reference scene.
pub fn eval_directories(
    ref_dir: &Path,
    est_dir: &Path,
    options: EvalOptions,
) -> Result<EvalReport> {
    let ref_scenes = discover_scenes(ref_dir)?;
    let est_scenes = discover_scenes(est_dir)?;
    if ref_scenes.len() != est_scenes.len() {
        return Err(Error::SceneCountMismatch {
            references: ref_scenes.len(),
            estimates: est_scenes.len(),
        });
    }

    let mut scenes = Vec::with_capacity(ref_scenes.len());
    for ((name, ref_paths), (_, est_paths)) in ref_scenes.into_iter().zip(est_scenes) {
        if ref_paths.len() != est_paths.len() {
            return Err(Error::SceneFileCountMismatch {
                scene: name,
                references: ref_paths.len(),
                estimates: est_paths.len(),
            });
        }
        let refs = load_scene(&ref_paths, options)?;
        let ests = load_scene(&est_paths, options)?;
        let (targets, predictions) = truncate_to_common(&name, refs, ests)?;
        scenes.push(SceneScore {
            scene: name,
            n_sources: targets.n(),
            opt_perm_si_sdr: optimal_perm_si_sdr(&targets, &predictions)?,
            auc_sdr: auc_sdr(&targets, &predictions)?.auc,
        });
    }

    let count = scenes.len() as f64;
    let mean_si_sdr = scenes.iter().map(|s| s.opt_perm_si_sdr).sum::<f64>() / count;
    let mean_auc = scenes.iter().map(|s| s.auc_sdr).sum::<f64>() / count;
    Ok(EvalReport {
        scenes,
        mean_si_sdr,
        mean_auc,
    })
}
