#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace idcluster {

/// Pre-order node number. The document root is always 1; 0 means "no node".
using NodeId = std::int32_t;
using KeywordId = std::uint32_t;

inline constexpr NodeId kNoNode = 0;

enum class NodeKind : std::uint8_t { Element = 0, Attribute = 1 };

/// Interned keyword strings. Ids are dense and assigned in first-seen order.
class Vocabulary {
public:
    KeywordId intern(std::string_view word);
    std::optional<KeywordId> find(std::string_view word) const;

    const std::string& word(KeywordId id) const { return words_[id]; }
    std::size_t size() const { return words_.size(); }
    const std::vector<std::string>& words() const { return words_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    std::vector<std::string> words_;
    std::unordered_map<std::string, KeywordId, Hash, std::equal_to<>> ids_;
};

/// Split `text` at runs of Unicode white space. Everything else, punctuation
/// included, is kept verbatim. Keyword matching downstream is case-sensitive.
std::vector<std::string> tokenize(std::string_view text);

class DocumentBuilder;

/// Labeled ordered tree with pre-order ids 1..N. Immutable once built.
///
/// Storage is columnar: per-node arrays indexed by NodeId (slot 0 unused) and
/// one flat array of interned keyword ids. Each node's direct keyword set is
/// sorted by keyword id and duplicate-free. The label is always one of the
/// node's keywords.
class DocumentTree {
public:
    DocumentTree() = default;

    NodeId size() const { return static_cast<NodeId>(parent_.size()) - 1; }
    bool empty() const { return size() == 0; }
    static constexpr NodeId root() { return 1; }

    NodeId parent(NodeId n) const { return parent_[n]; }
    /// One past the last id in n's subtree.
    NodeId subtree_end(NodeId n) const { return end_[n]; }
    NodeKind kind(NodeId n) const { return kind_[n]; }
    KeywordId label_id(NodeId n) const { return label_[n]; }
    const std::string& label(NodeId n) const { return vocab_.word(label_[n]); }
    std::span<const KeywordId> keywords(NodeId n) const {
        return {kw_data_.data() + kw_begin_[n], kw_data_.data() + kw_begin_[n + 1]};
    }
    bool directly_contains(NodeId n, KeywordId w) const;

    /// Children in document order.
    std::vector<NodeId> children(NodeId n) const;
    std::uint32_t depth(NodeId n) const;

    const Vocabulary& vocabulary() const { return vocab_; }

    /// Structural equality: same shape, kinds, labels and keyword strings.
    friend bool operator==(const DocumentTree& a, const DocumentTree& b);

private:
    friend class DocumentBuilder;

    Vocabulary vocab_;
    std::vector<NodeId> parent_{kNoNode};
    std::vector<NodeId> end_{kNoNode};
    std::vector<NodeKind> kind_{NodeKind::Element};
    std::vector<KeywordId> label_{0};
    std::vector<std::uint64_t> kw_begin_{0};
    std::vector<KeywordId> kw_data_;
};

/// Incremental construction in document order. Used by the XML parser, the
/// DAG unfolder and the synthetic generators.
class DocumentBuilder {
public:
    NodeId open(NodeKind kind, std::string_view label);
    /// Append text to the innermost open node. Chunks are concatenated until
    /// a child opens or the node closes, then tokenized.
    void text(std::string_view chunk);
    void close();
    NodeId attribute(std::string_view name, std::string_view value);

    /// Add one already-tokenized keyword to the innermost open node.
    void keyword(std::string_view word);

    std::size_t open_depth() const { return stack_.size(); }
    NodeId node_count() const { return tree_.size(); }

    /// Throws std::logic_error if nodes are still open or nothing was built.
    DocumentTree finish();

private:
    void flush_text();

    DocumentTree tree_;
    std::vector<NodeId> stack_;
    std::vector<std::size_t> pending_mark_;
    std::vector<KeywordId> pending_;
    std::string text_;
    std::vector<std::uint64_t> kw_offset_{0};
    std::vector<std::uint32_t> kw_count_{0};
    std::vector<KeywordId> kw_store_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

/// Parse a UTF-8 XML document. Elements and attributes become nodes; an
/// element's attributes come first among its children, in document order.
/// Text chunks attach to the enclosing element. Throws ParseError.
DocumentTree parse_document(std::string_view xml);
DocumentTree parse_document_file(const std::string& path);

/// Serialize back to XML such that parse_document(serialize(t)) == t.
/// Text is emitted as the node's keywords other than its label.
std::string serialize_document(const DocumentTree& tree);

/// Whole file, or standard input when path is "-". Throws std::runtime_error.
std::string read_file(const std::string& path);

}  // namespace idcluster
