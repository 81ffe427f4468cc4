use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use super::{
    consolidate_labels, parse_labels_in, parse_ocr_in, parse_transcript_in, parse_video_in, AnnotationLabels, OcrDoc,
    TranscriptDoc, VideoRecord,
};
use crate::{Error, Result};

/// Immutable, referentially consistent collection of corpus documents.
#[derive(Debug, Clone, Default)]
pub struct CorpusStore {
    videos: BTreeMap<String, VideoRecord>,
    transcripts: BTreeMap<String, TranscriptDoc>,
    ocr: BTreeMap<String, OcrDoc>,
    labels: BTreeMap<String, AnnotationLabels>,
}

impl CorpusStore {
    /// Builds a store, consolidating per-annotator labels by majority vote.
    ///
    /// Fails if any video id is duplicated within one input or if a
    /// transcript, OCR document or label refers to an unknown video.
    pub fn new(
        videos: Vec<VideoRecord>,
        transcripts: Vec<TranscriptDoc>,
        ocr: Vec<OcrDoc>,
        label_rows: Vec<AnnotationLabels>,
    ) -> Result<Self> {
        let videos = unique_map("video metadata", videos, |v| &v.video_id)?;
        let transcripts = unique_map("transcripts", transcripts, |t| &t.video_id)?;
        let ocr = unique_map("ocr", ocr, |o| &o.video_id)?;

        let mut dangling = BTreeSet::new();
        dangling.extend(transcripts.keys().filter(|k| !videos.contains_key(*k)).cloned());
        dangling.extend(ocr.keys().filter(|k| !videos.contains_key(*k)).cloned());
        dangling.extend(
            label_rows
                .iter()
                .map(|l| &l.video_id)
                .filter(|k| !videos.contains_key(*k))
                .cloned(),
        );
        if !dangling.is_empty() {
            return Err(Error::Integrity(format!(
                "documents reference unknown video ids: {}",
                dangling.into_iter().collect::<Vec<_>>().join(", ")
            )));
        }

        let mut grouped: BTreeMap<String, Vec<AnnotationLabels>> = BTreeMap::new();
        for row in label_rows {
            grouped.entry(row.video_id.clone()).or_default().push(row);
        }
        let labels = grouped
            .into_iter()
            .map(|(id, rows)| consolidate_labels(&rows).map(|l| (id, l)))
            .collect::<Result<_>>()?;

        Ok(CorpusStore {
            videos,
            transcripts,
            ocr,
            labels,
        })
    }

    pub fn videos(&self) -> &BTreeMap<String, VideoRecord> {
        &self.videos
    }

    pub fn transcripts(&self) -> &BTreeMap<String, TranscriptDoc> {
        &self.transcripts
    }

    pub fn ocr(&self) -> &BTreeMap<String, OcrDoc> {
        &self.ocr
    }

    /// Consolidated labels keyed by video id.
    pub fn labels(&self) -> &BTreeMap<String, AnnotationLabels> {
        &self.labels
    }

    pub fn video(&self, id: &str) -> Option<&VideoRecord> {
        self.videos.get(id)
    }

    pub fn transcript(&self, id: &str) -> Option<&TranscriptDoc> {
        self.transcripts.get(id)
    }

    pub fn ocr_doc(&self, id: &str) -> Option<&OcrDoc> {
        self.ocr.get(id)
    }

    pub fn label(&self, id: &str) -> Option<&AnnotationLabels> {
        self.labels.get(id)
    }
}

fn unique_map<T>(what: &str, items: Vec<T>, key: impl Fn(&T) -> &String) -> Result<BTreeMap<String, T>> {
    let mut map = BTreeMap::new();
    let mut duplicates = BTreeSet::new();
    for item in items {
        let id = key(&item).clone();
        match map.entry(id) {
            std::collections::btree_map::Entry::Occupied(e) => {
                duplicates.insert(e.key().clone());
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(item);
            }
        }
    }
    if duplicates.is_empty() {
        Ok(map)
    } else {
        Err(Error::Integrity(format!(
            "duplicate video ids in {what}: {}",
            duplicates.into_iter().collect::<Vec<_>>().join(", ")
        )))
    }
}

#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub videos: PathBuf,
    pub transcripts: PathBuf,
    pub ocr: PathBuf,
    pub labels: PathBuf,
}

impl CorpusPaths {
    /// The conventional file names inside one directory.
    pub fn in_dir(dir: &Path) -> Self {
        CorpusPaths {
            videos: dir.join("videos.jsonl"),
            transcripts: dir.join("transcripts.jsonl"),
            ocr: dir.join("ocr.jsonl"),
            labels: dir.join("labels.jsonl"),
        }
    }
}

/// Counts reported after loading.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadSummary {
    pub videos: usize,
    pub transcripts: usize,
    pub ocr: usize,
    /// Per-annotator label rows before consolidation.
    pub label_rows: usize,
    pub labeled_videos: usize,
    /// Blank lines skipped across all files.
    pub skipped_lines: usize,
    pub warnings: Vec<String>,
}

impl fmt::Display for LoadSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} videos, {} transcripts, {} ocr, {} labels",
            self.videos, self.transcripts, self.ocr, self.label_rows
        )
    }
}

/// Reads a JSON Lines file, parsing each non-blank line with `parse`.
/// Returns the parsed items and the number of blank lines skipped.
pub fn read_jsonl<T>(path: &Path, parse: impl Fn(&str, &str) -> Result<T>) -> Result<(Vec<T>, usize)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut items = Vec::new();
    let mut skipped = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            skipped += 1;
            continue;
        }
        let context = format!("{}:{}", path.display(), i + 1);
        items.push(parse(&context, line)?);
    }
    Ok((items, skipped))
}

/// Loads the four corpus files, parsing them in parallel.
pub fn load_corpus(paths: &CorpusPaths) -> Result<(CorpusStore, LoadSummary)> {
    let (videos, transcripts, ocr, labels) = std::thread::scope(|s| {
        let v = s.spawn(|| read_jsonl(&paths.videos, parse_video_in));
        let t = s.spawn(|| read_jsonl(&paths.transcripts, parse_transcript_in));
        let o = s.spawn(|| read_jsonl(&paths.ocr, parse_ocr_in));
        let l = s.spawn(|| read_jsonl(&paths.labels, parse_labels_in));
        (
            v.join().expect("metadata reader panicked"),
            t.join().expect("transcript reader panicked"),
            o.join().expect("ocr reader panicked"),
            l.join().expect("label reader panicked"),
        )
    });
    let (videos, s1) = videos?;
    let (transcripts, s2) = transcripts?;
    let (ocr, s3) = ocr?;
    let (labels, s4) = labels?;

    let mut summary = LoadSummary {
        videos: videos.len(),
        transcripts: transcripts.len(),
        ocr: ocr.len(),
        label_rows: labels.len(),
        skipped_lines: s1 + s2 + s3 + s4,
        ..Default::default()
    };
    if labels.is_empty() {
        summary.warnings.push(format!(
            "{}: no labels; classifiers cannot be trained",
            paths.labels.display()
        ));
    }
    let store = CorpusStore::new(videos, transcripts, ocr, labels)?;
    summary.labeled_videos = store.labels().len();
    for id in store.videos().keys() {
        if !store.transcripts().contains_key(id) {
            summary.warnings.push(format!("video {id} has no transcript"));
        }
    }
    Ok((store, summary))
}
