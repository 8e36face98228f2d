#include "idcluster/document.hpp"

#include <expat.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <memory>
#include <sstream>

namespace idcluster {

KeywordId Vocabulary::intern(std::string_view word) {
    if (auto it = ids_.find(word); it != ids_.end()) return it->second;
    auto id = static_cast<KeywordId>(words_.size());
    words_.emplace_back(word);
    ids_.emplace(words_.back(), id);
    return id;
}

std::optional<KeywordId> Vocabulary::find(std::string_view word) const {
    if (auto it = ids_.find(word); it != ids_.end()) return it->second;
    return std::nullopt;
}

namespace {

// Length of the white-space code point starting at s[i], or 0 if s[i] does not
// start one. Covers the Unicode White_Space property.
std::size_t space_length(std::string_view s, std::size_t i) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 == ' ' || (b0 >= 0x09 && b0 <= 0x0D)) return 1;
    if (b0 < 0xC2) return 0;
    auto at = [&](std::size_t k) -> unsigned {
        return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) : 0u;
    };
    if (b0 == 0xC2) {
        // U+0085, U+00A0
        return (at(1) == 0x85 || at(1) == 0xA0) ? 2 : 0;
    }
    if (b0 == 0xE1) {
        // U+1680
        return (at(1) == 0x9A && at(2) == 0x80) ? 3 : 0;
    }
    if (b0 == 0xE2) {
        unsigned b1 = at(1), b2 = at(2);
        if (b1 == 0x80) {
            // U+2000..U+200A, U+2028, U+2029, U+202F
            if ((b2 >= 0x80 && b2 <= 0x8A) || b2 == 0xA8 || b2 == 0xA9 || b2 == 0xAF) return 3;
            return 0;
        }
        // U+205F
        return (b1 == 0x81 && b2 == 0x9F) ? 3 : 0;
    }
    if (b0 == 0xE3) {
        // U+3000
        return (at(1) == 0x80 && at(2) == 0x80) ? 3 : 0;
    }
    return 0;
}

template <typename Emit>
void for_each_token(std::string_view text, Emit&& emit) {
    std::size_t i = 0;
    std::size_t start = std::string_view::npos;
    while (i < text.size()) {
        std::size_t sp = space_length(text, i);
        if (sp > 0) {
            if (start != std::string_view::npos) {
                emit(text.substr(start, i - start));
                start = std::string_view::npos;
            }
            i += sp;
        } else {
            if (start == std::string_view::npos) start = i;
            ++i;
        }
    }
    if (start != std::string_view::npos) emit(text.substr(start));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for_each_token(text, [&](std::string_view tok) { out.emplace_back(tok); });
    return out;
}

bool DocumentTree::directly_contains(NodeId n, KeywordId w) const {
    auto kws = keywords(n);
    return std::binary_search(kws.begin(), kws.end(), w);
}

std::vector<NodeId> DocumentTree::children(NodeId n) const {
    std::vector<NodeId> out;
    for (NodeId c = n + 1; c < end_[n]; c = end_[c]) out.push_back(c);
    return out;
}

std::uint32_t DocumentTree::depth(NodeId n) const {
    std::uint32_t d = 0;
    while (parent_[n] != kNoNode) {
        n = parent_[n];
        ++d;
    }
    return d;
}

bool operator==(const DocumentTree& a, const DocumentTree& b) {
    if (a.size() != b.size()) return false;
    if (a.parent_ != b.parent_ || a.end_ != b.end_ || a.kind_ != b.kind_) return false;
    std::vector<std::string_view> ka, kb;
    for (NodeId n = 1; n <= a.size(); ++n) {
        if (a.label(n) != b.label(n)) return false;
        ka.clear();
        kb.clear();
        for (auto w : a.keywords(n)) ka.push_back(a.vocab_.word(w));
        for (auto w : b.keywords(n)) kb.push_back(b.vocab_.word(w));
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        if (ka != kb) return false;
    }
    return true;
}

// --- DocumentBuilder ---

NodeId DocumentBuilder::open(NodeKind kind, std::string_view label) {
    if (tree_.size() == 0 && !stack_.empty()) throw std::logic_error("builder state corrupted");
    if (stack_.empty() && tree_.size() > 0) throw std::logic_error("document already has a root");
    if (tree_.size() >= std::numeric_limits<NodeId>::max() - 1)
        throw std::length_error("document exceeds 32-bit node id range");
    if (label.empty()) throw std::invalid_argument("node label must not be empty");
    for (std::size_t i = 0; i < label.size(); ++i)
        if (space_length(label, i) > 0) throw std::invalid_argument("node label contains white space");
    flush_text();

    auto id = static_cast<NodeId>(tree_.parent_.size());
    tree_.parent_.push_back(stack_.empty() ? kNoNode : stack_.back());
    tree_.end_.push_back(kNoNode);
    tree_.kind_.push_back(kind);
    auto label_id = tree_.vocab_.intern(label);
    tree_.label_.push_back(label_id);
    kw_offset_.push_back(0);
    kw_count_.push_back(0);

    stack_.push_back(id);
    pending_mark_.push_back(pending_.size());
    pending_.push_back(label_id);
    return id;
}

void DocumentBuilder::text(std::string_view chunk) {
    if (stack_.empty()) return;  // white space around the root
    text_.append(chunk);
}

void DocumentBuilder::keyword(std::string_view word) {
    if (stack_.empty()) throw std::logic_error("keyword outside of any node");
    if (word.empty()) return;
    flush_text();
    pending_.push_back(tree_.vocab_.intern(word));
}

void DocumentBuilder::flush_text() {
    if (text_.empty()) return;
    for_each_token(text_, [&](std::string_view tok) { pending_.push_back(tree_.vocab_.intern(tok)); });
    text_.clear();
}

void DocumentBuilder::close() {
    if (stack_.empty()) throw std::logic_error("close without open node");
    flush_text();
    NodeId id = stack_.back();
    std::size_t mark = pending_mark_.back();
    auto first = pending_.begin() + static_cast<std::ptrdiff_t>(mark);
    std::sort(first, pending_.end());
    auto last = std::unique(first, pending_.end());
    kw_offset_[id] = kw_store_.size();
    kw_count_[id] = static_cast<std::uint32_t>(last - first);
    kw_store_.insert(kw_store_.end(), first, last);
    pending_.resize(mark);
    pending_mark_.pop_back();
    stack_.pop_back();
    tree_.end_[id] = static_cast<NodeId>(tree_.parent_.size());
}

NodeId DocumentBuilder::attribute(std::string_view name, std::string_view value) {
    NodeId id = open(NodeKind::Attribute, name);
    text(value);
    close();
    return id;
}

DocumentTree DocumentBuilder::finish() {
    if (!stack_.empty()) throw std::logic_error("unclosed nodes remain");
    if (tree_.size() == 0) throw std::logic_error("empty document");
    auto n = static_cast<std::size_t>(tree_.size());
    tree_.kw_begin_.assign(n + 2, 0);
    tree_.kw_data_.clear();
    tree_.kw_data_.reserve(kw_store_.size());
    for (std::size_t id = 1; id <= n; ++id) {
        tree_.kw_begin_[id] = tree_.kw_data_.size();
        auto first = kw_store_.begin() + static_cast<std::ptrdiff_t>(kw_offset_[id]);
        tree_.kw_data_.insert(tree_.kw_data_.end(), first, first + kw_count_[id]);
    }
    tree_.kw_begin_[n + 1] = tree_.kw_data_.size();
    kw_store_ = {};
    DocumentTree out = std::move(tree_);
    tree_ = DocumentTree{};
    kw_offset_ = {0};
    kw_count_ = {0};
    return out;
}

// --- XML parsing ---

namespace {

struct ParserState {
    XML_Parser parser = nullptr;
    DocumentBuilder builder;
    std::string error;

    void fail(const char* what) {
        error = what;
        XML_StopParser(parser, XML_FALSE);
    }
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<ParserState*>(user);
    try {
        st->builder.open(NodeKind::Element, name);
        for (std::size_t i = 0; attrs[i] != nullptr; i += 2) st->builder.attribute(attrs[i], attrs[i + 1]);
    } catch (const std::exception& e) {
        st->fail(e.what());
    }
}

void XMLCALL on_end(void* user, const XML_Char*) {
    auto* st = static_cast<ParserState*>(user);
    if (st->error.empty()) st->builder.close();
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
    auto* st = static_cast<ParserState*>(user);
    st->builder.text(std::string_view(s, static_cast<std::size_t>(len)));
}

struct ParserDeleter {
    void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

DocumentTree parse_document(std::string_view xml) {
    if (xml.empty()) throw ParseError("empty input", 0);
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) throw std::bad_alloc();
    ParserState state;
    state.parser = parser.get();
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);

    // Feed in slices so inputs beyond INT_MAX bytes work.
    constexpr std::size_t kSlice = 1u << 26;
    std::size_t pos = 0;
    do {
        std::size_t len = std::min(kSlice, xml.size() - pos);
        bool last = pos + len == xml.size();
        auto status = XML_Parse(parser.get(), xml.data() + pos, static_cast<int>(len), last);
        if (!state.error.empty()) {
            throw ParseError(state.error, static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser.get())));
        }
        if (status == XML_STATUS_ERROR) {
            throw ParseError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                             static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser.get())));
        }
        pos += len;
    } while (pos < xml.size());
    return state.builder.finish();
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failed: " + path);
    return data;
}

DocumentTree parse_document_file(const std::string& path) { return parse_document(read_file(path)); }

// --- serialization ---

namespace {

void escape(std::string& out, std::string_view s, bool attr) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attr) out += "&quot;";
                else out += c;
                break;
            default: out += c;
        }
    }
}

void append_text(std::string& out, const DocumentTree& t, NodeId n, bool attr) {
    bool first = true;
    for (auto w : t.keywords(n)) {
        if (w == t.label_id(n)) continue;
        if (!first) out += ' ';
        escape(out, t.vocabulary().word(w), attr);
        first = false;
    }
}

}  // namespace

std::string serialize_document(const DocumentTree& t) {
    std::string out;
    if (t.empty()) return out;
    struct Frame {
        NodeId node;
        NodeId next_child;
    };
    std::vector<Frame> stack;
    auto open_element = [&](NodeId n) {
        out += '<';
        out += t.label(n);
        NodeId c = n + 1;
        for (; c < t.subtree_end(n) && t.kind(c) == NodeKind::Attribute; c = t.subtree_end(c)) {
            out += ' ';
            out += t.label(c);
            out += "=\"";
            append_text(out, t, c, true);
            out += '"';
        }
        out += '>';
        append_text(out, t, n, false);
        stack.push_back({n, c});
    };
    open_element(DocumentTree::root());
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_child < t.subtree_end(f.node)) {
            NodeId c = f.next_child;
            f.next_child = t.subtree_end(c);
            open_element(c);
        } else {
            out += "</";
            out += t.label(f.node);
            out += '>';
            stack.pop_back();
        }
    }
    out += '\n';
    return out;
}

}  // namespace idcluster
