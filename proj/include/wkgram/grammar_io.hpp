#ifndef WKGRAM_GRAMMAR_IO_HPP
#define WKGRAM_GRAMMAR_IO_HPP

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace wkgram {

class parse_error : public grammar_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : grammar_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool is_ident_start(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

struct RawRule {
    std::string lhs;
    std::vector<std::variant<std::string, DsString>> rhs;
    std::size_t line;
};

}  // namespace detail

/// Parses the grammar text format:
///
///     # comment
///     start: S
///     relation: identity            (or pairs: a~t t~a c~g g~c)
///     S -> [a/a] S | [ab/] A [/c] | [/]
///
/// Non-terminals are identifiers starting with an uppercase letter; DS
/// literals are [upper/lower] with either strand possibly empty.
inline Grammar parse_grammar(std::string_view text)
{
    using detail::trim;

    std::optional<std::string> start;
    std::optional<Relation> relation;
    std::vector<detail::RawRule> raw;

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.starts_with("start:")) {
            if (start) throw parse_error(lineno, "duplicate start declaration");
            auto name = trim(line.substr(6));
            if (name.empty() || !detail::is_ident_start(name.front()) ||
                !std::all_of(name.begin(), name.end(), detail::is_ident_char))
                throw parse_error(lineno, "invalid start symbol '" + std::string(name) + "'");
            start = std::string(name);
            continue;
        }
        if (line.starts_with("relation:")) {
            if (relation) throw parse_error(lineno, "duplicate relation declaration");
            auto body = trim(line.substr(9));
            if (body == "identity") {
                relation = Relation::identity("");
                continue;
            }
            Relation r;
            std::istringstream in{std::string(body)};
            std::string pair;
            while (in >> pair) {
                if (pair.size() != 3 || pair[1] != '~' || !is_valid_terminal(pair[0]) || !is_valid_terminal(pair[2]))
                    throw parse_error(lineno, "invalid relation pair '" + pair + "'");
                r.add(pair[0], pair[2]);
            }
            relation = r;
            continue;
        }

        auto arrow = line.find("->");
        if (arrow == std::string_view::npos) throw parse_error(lineno, "expected 'A -> ...'");
        auto lhs = trim(line.substr(0, arrow));
        if (lhs.empty() || !detail::is_ident_start(lhs.front()) ||
            !std::all_of(lhs.begin(), lhs.end(), detail::is_ident_char))
            throw parse_error(lineno, "invalid left-hand side '" + std::string(lhs) + "'");

        std::string_view body = line.substr(arrow + 2);
        detail::RawRule cur{std::string(lhs), {}, lineno};
        bool any_token = false;
        std::size_t i = 0;
        auto flush = [&] {
            if (!any_token) throw parse_error(lineno, "empty alternative (write [/] for lambda)");
            raw.push_back(cur);
            cur.rhs.clear();
            any_token = false;
        };
        while (i < body.size()) {
            char c = body[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '|') {
                flush();
                ++i;
            } else if (c == '[') {
                auto close = body.find(']', i);
                if (close == std::string_view::npos) throw parse_error(lineno, "unterminated DS literal");
                auto inner = body.substr(i + 1, close - i - 1);
                auto slash = inner.find('/');
                if (slash == std::string_view::npos || inner.find('/', slash + 1) != std::string_view::npos)
                    throw parse_error(lineno, "DS literal must contain exactly one '/'");
                DsString ds{std::string(inner.substr(0, slash)), std::string(inner.substr(slash + 1))};
                for (char t : ds.upper + ds.lower)
                    if (!is_valid_terminal(t))
                        throw parse_error(lineno, std::string("invalid terminal '") + t + "'");
                cur.rhs.emplace_back(std::move(ds));
                any_token = true;
                i = close + 1;
            } else if (detail::is_ident_start(c)) {
                auto j = i;
                while (j < body.size() && detail::is_ident_char(body[j])) ++j;
                cur.rhs.emplace_back(std::string(body.substr(i, j - i)));
                any_token = true;
                i = j;
            } else {
                throw parse_error(lineno, std::string("unexpected character '") + c + "'");
            }
        }
        flush();
    }

    if (!start) throw parse_error(lineno, "missing 'start:' declaration");

    std::vector<std::string> names;
    std::unordered_map<std::string, std::uint32_t> ids;
    auto intern = [&](const std::string& n) {
        auto [it, fresh] = ids.emplace(n, static_cast<std::uint32_t>(names.size()));
        if (fresh) names.push_back(n);
        return NonTerminal{it->second};
    };
    NonTerminal s = intern(*start);
    for (const auto& r : raw) intern(r.lhs);

    std::vector<Rule> rules;
    for (const auto& r : raw) {
        Rule rule;
        rule.lhs = intern(r.lhs);
        for (const auto& tok : r.rhs) {
            if (const auto* n = std::get_if<std::string>(&tok))
                rule.rhs.emplace_back(intern(*n));
            else
                rule.rhs.emplace_back(std::get<DsString>(tok));
        }
        rules.push_back(std::move(rule));
    }
    return Grammar(std::move(names), s, relation.value_or(Relation::identity("")), std::move(rules));
}

/// Renders a grammar in the text format. One line per left-hand side (in
/// order of first appearance), alternatives joined with " | ".
inline std::string format_grammar(const Grammar& g, std::string_view header_comment = {})
{
    std::ostringstream out;
    if (!header_comment.empty()) {
        std::istringstream lines{std::string(header_comment)};
        for (std::string l; std::getline(lines, l);) out << "# " << l << '\n';
    }
    out << "start: " << g.name(g.start()) << '\n';
    if (g.relation().declared_identity() || g.relation().is_identity_on(g.terminals())) {
        out << "relation: identity\n";
    } else {
        out << "relation:";
        for (auto [a, b] : g.relation().pairs()) out << ' ' << a << '~' << b;
        out << '\n';
    }

    std::vector<std::uint32_t> order;
    std::vector<bool> seen(g.nonterminal_count(), false);
    for (const auto& r : g.rules())
        if (!seen[r.lhs.id]) {
            seen[r.lhs.id] = true;
            order.push_back(r.lhs.id);
        }
    for (auto id : order) {
        out << g.name(NonTerminal{id}) << " ->";
        bool first = true;
        for (auto ri : g.rules_for(NonTerminal{id})) {
            out << (first ? " " : " | ");
            first = false;
            bool first_tok = true;
            for (const auto& l : g.rule(ri).rhs) {
                if (!first_tok) out << ' ';
                first_tok = false;
                out << to_string(l, g);
            }
        }
        out << '\n';
    }
    return out.str();
}

inline Grammar read_grammar_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open grammar file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_grammar(ss.str());
}

inline void write_grammar_file(const std::filesystem::path& path, const Grammar& g, std::string_view header_comment = {})
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write grammar file " + path.string());
    out << format_grammar(g, header_comment);
}

}  // namespace wkgram

#endif  // WKGRAM_GRAMMAR_IO_HPP
