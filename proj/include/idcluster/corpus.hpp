#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace idcluster {

/// Synthetic record-oriented corpus shaped like a music release database:
/// one root with many <release> records. Parts of each record are unique
/// (ids, image uris, barcodes), parts are drawn from small pools and repeat
/// verbatim across records (genres, countries, format descriptions).
struct CorpusOptions {
    std::uint64_t seed = 42;
    /// Stop after this many records...
    std::size_t records = 1000;
    /// ...or, when nonzero, once the output reaches this many bytes.
    std::size_t target_bytes = 0;
    /// Probability that a record's <formats> block is a verbatim copy of a
    /// pooled template rather than a one-off variant.
    double duplicate_ratio = 0.5;
    /// Zipf exponent for free-text words (titles, names).
    double keyword_skew = 1.0;
    std::size_t vocabulary_size = 20000;
};

std::string generate_corpus(const CorpusOptions& options);

/// Queries matching the generated corpus, three per category, lengths 2-4.
std::vector<std::vector<std::string>> default_corpus_queries();

/// Keep the first ceil(fraction * records) element children of the root.
/// Throws std::invalid_argument for fraction outside (0, 1], ParseError for
/// malformed input.
std::string scale_corpus(std::string_view xml, double fraction);

/// Number of element children of the document root.
std::size_t count_records(std::string_view xml);

/// One query per line, keywords separated by white space. '#' at the start
/// of a line or after white space begins a comment.
std::vector<std::vector<std::string>> parse_query_file(std::string_view text);

}  // namespace idcluster
