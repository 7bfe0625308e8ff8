#pragma once

#include <stdexcept>
#include <string>

namespace evalda {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid hyperparameters or out-of-range configuration values.
struct ConfigError : Error {
    using Error::Error;
};

// Corpus or model files that cannot be read or are structurally broken.
struct IngestError : Error {
    using Error::Error;
};

// Malformed embedding/synonym/model file contents; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Document cannot be inferred (e.g. empty after out-of-vocabulary filtering).
struct InferenceError : Error {
    using Error::Error;
};

// Surrogate estimate degenerated: the document shares no mass with any topic.
struct EstimateError : Error {
    using Error::Error;
};

// A word required to be present in a table (embeddings) is missing.
struct WordLookupError : Error {
    using Error::Error;
};

}  // namespace evalda
