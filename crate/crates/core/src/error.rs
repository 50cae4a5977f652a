// Copyright 2026 The trendminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid itemset: {0}")]
    InvalidItemSet(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("confidence undefined: antecedent occurs in no transaction")]
    UndefinedConfidence,

    #[error("oracle refused: {distinct} distinct items exceeds guard of {guard}")]
    OracleRefused { distinct: usize, guard: usize },

    #[error("series has {defined} defined values, at least {required} required")]
    SeriesTooShort { defined: usize, required: usize },

    #[error("series has no defined values")]
    AllUndefined,

    #[error("thematic field is empty")]
    EmptyField,

    #[error("corpus cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
