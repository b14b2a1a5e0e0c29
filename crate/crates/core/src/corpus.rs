//! Plain-text corpora and consecutive word-span sampling.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{source_name}: invalid UTF-8 at byte offset {offset}")]
    InvalidEncoding { source_name: String, offset: usize },
    #[error("corpus is empty after dropping documents without words")]
    Empty,
    #[error("no renderable span found after {attempts} attempts")]
    NoRenderableSpan { attempts: u32 },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// How documents are laid out on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusFormat {
    /// A single text file; each line is one document.
    OneDocumentPerLine,
    /// A directory of `.txt` files; each file is one document.
    OneDocumentPerFile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub words: Vec<String>,
}

impl Document {
    /// Whitespace tokenization; `None` when the text has no words.
    pub fn from_text(id: impl Into<String>, text: &str) -> Option<Self> {
        let words: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
        (!words.is_empty()).then(|| Self {
            id: id.into(),
            words,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    total_words: usize,
    dropped: usize,
}

impl Corpus {
    /// Builds a corpus from `(id, text)` pairs, dropping texts without words.
    pub fn from_texts<I, S, T>(texts: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut documents = Vec::new();
        let mut dropped = 0;
        for (id, text) in texts {
            match Document::from_text(id, text.as_ref()) {
                Some(doc) => documents.push(doc),
                None => dropped += 1,
            }
        }
        if documents.is_empty() {
            return Err(CorpusError::Empty);
        }
        let total_words = documents.iter().map(|d| d.words.len()).sum();
        Ok(Self {
            documents,
            total_words,
            dropped,
        })
    }

    /// One document per line of a UTF-8 stream.
    pub fn from_lines(name: &str, mut reader: impl Read) -> Result<Self, CorpusError> {
        let mut bytes = Vec::new();
        reader
            .read_to_end(&mut bytes)
            .map_err(|source| CorpusError::Io {
                path: PathBuf::from(name),
                source,
            })?;
        let text = decode(name, bytes)?;
        Self::from_texts(
            text.lines()
                .enumerate()
                .map(|(i, line)| (format!("{name}:{i}"), line)),
        )
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn total_words(&self) -> usize {
        self.total_words
    }

    /// Number of source documents dropped because they had no words.
    pub fn dropped(&self) -> usize {
        self.dropped
    }
}

fn decode(name: &str, bytes: Vec<u8>) -> Result<String, CorpusError> {
    String::from_utf8(bytes).map_err(|e| CorpusError::InvalidEncoding {
        source_name: name.to_owned(),
        offset: e.utf8_error().valid_up_to(),
    })
}

fn read_file(path: &Path) -> Result<String, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })?;
    decode(&path.display().to_string(), bytes)
}

/// Loads a corpus from a file (line format) or a directory of `.txt` files.
///
/// Directory entries are read in sorted file-name order.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::OneDocumentPerLine => {
            let text = read_file(path)?;
            let name = path.display().to_string();
            Corpus::from_texts(
                text.lines()
                    .enumerate()
                    .map(|(i, line)| (format!("{name}:{i}"), line.to_owned())),
            )
        }
        CorpusFormat::OneDocumentPerFile => {
            let io_err = |source| CorpusError::Io {
                path: path.to_owned(),
                source,
            };
            let mut files: Vec<PathBuf> = fs::read_dir(path)
                .map_err(io_err)?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "txt"))
                .collect();
            files.sort();
            let mut texts = Vec::with_capacity(files.len());
            for file in files {
                let id = file
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                texts.push((id, read_file(&file)?));
            }
            Corpus::from_texts(texts)
        }
    }
}

/// Consecutive words taken from one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextSample {
    pub words: Vec<String>,
    pub source_doc: String,
}

/// How [`sample_span`] picks a document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocumentSelection {
    #[default]
    Uniform,
    LengthWeighted,
}

/// Samples up to `max_words` consecutive words from a random document.
///
/// The start index is uniform over the whole document; the span is cut
/// short at the document's end, so its length is always in `[1, max_words]`.
pub fn sample_span<R: Rng + ?Sized>(corpus: &Corpus, rng: &mut R, max_words: usize) -> TextSample {
    sample_span_with(corpus, rng, max_words, DocumentSelection::Uniform)
}

pub fn sample_span_with<R: Rng + ?Sized>(
    corpus: &Corpus,
    rng: &mut R,
    max_words: usize,
    selection: DocumentSelection,
) -> TextSample {
    assert!(max_words >= 1, "max_words must be at least 1");
    let doc = match selection {
        DocumentSelection::Uniform => &corpus.documents[rng.gen_range(0..corpus.documents.len())],
        DocumentSelection::LengthWeighted => {
            let mut target = rng.gen_range(0..corpus.total_words);
            corpus
                .documents
                .iter()
                .find(|d| {
                    if target < d.words.len() {
                        true
                    } else {
                        target -= d.words.len();
                        false
                    }
                })
                .expect("target is below total_words")
        }
    };
    let start = rng.gen_range(0..doc.words.len());
    let end = (start + max_words).min(doc.words.len());
    TextSample {
        words: doc.words[start..end].to_vec(),
        source_doc: doc.id.clone(),
    }
}

/// Resamples until every word passes `accept`, up to `max_attempts` draws.
pub fn sample_accepted_span<R, F>(
    corpus: &Corpus,
    rng: &mut R,
    max_words: usize,
    selection: DocumentSelection,
    max_attempts: u32,
    accept: F,
) -> Result<TextSample, CorpusError>
where
    R: Rng + ?Sized,
    F: Fn(&str) -> bool,
{
    for _ in 0..max_attempts {
        let sample = sample_span_with(corpus, rng, max_words, selection);
        if sample.words.iter().all(|w| accept(w)) {
            return Ok(sample);
        }
    }
    Err(CorpusError::NoRenderableSpan {
        attempts: max_attempts,
    })
}
