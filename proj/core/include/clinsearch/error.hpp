#pragma once

#include <stdexcept>

namespace clinsearch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: corpus, topics, lexicon, embeddings, run or qrels files.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or parameter combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure while computing metrics or statistics.
class EvalError : public Error {
public:
    using Error::Error;
};

} // namespace clinsearch
