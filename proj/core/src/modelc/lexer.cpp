#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "masforge/modelc/syntax.hpp"

namespace masforge {

SourceText SourceText::from_string(std::string path, std::string contents) {
    SourceText s;
    s.path = std::move(path);
    s.contents = std::move(contents);
    s.line_starts.push_back(0);
    for (std::size_t i = 0; i < s.contents.size(); ++i) {
        if (s.contents[i] == '\n') s.line_starts.push_back(i + 1);
    }
    return s;
}

SourceText SourceText::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(path, buf.str());
}

SourceLoc SourceText::locate(std::size_t offset) const {
    auto it = std::upper_bound(line_starts.begin(), line_starts.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts.begin());
    return {static_cast<int>(line), static_cast<int>(offset - line_starts[line - 1]) + 1};
}

std::string_view SourceText::line(int number) const {
    if (number < 1 || static_cast<std::size_t>(number) > line_starts.size()) return {};
    std::size_t start = line_starts[number - 1];
    std::size_t end = contents.find('\n', start);
    if (end == std::string::npos) end = contents.size();
    return std::string_view(contents).substr(start, end - start);
}

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool digit(char c) {
    return c >= '0' && c <= '9';
}

}  // namespace

LexResult lex(const SourceText& source) {
    LexResult out;
    const std::string& s = source.contents;
    std::size_t i = 0;
    auto push = [&](TokenKind kind, std::string text, std::size_t at) {
        out.tokens.push_back({kind, std::move(text), source.locate(at)});
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        const std::size_t start = i;
        if (ident_start(c)) {
            while (i < s.size() && ident_char(s[i])) ++i;
            push(TokenKind::Ident, s.substr(start, i - start), start);
            continue;
        }
        if (digit(c)) {
            bool real = false;
            while (i < s.size() && digit(s[i])) ++i;
            if (i + 1 < s.size() && s[i] == '.' && digit(s[i + 1])) {
                real = true;
                ++i;
                while (i < s.size() && digit(s[i])) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() && digit(s[j])) {
                    real = true;
                    i = j;
                    while (i < s.size() && digit(s[i])) ++i;
                }
            }
            push(real ? TokenKind::Real : TokenKind::Int, s.substr(start, i - start), start);
            continue;
        }
        if (c == '"') {
            std::string text;
            ++i;
            bool closed = false;
            while (i < s.size() && s[i] != '\n') {
                if (s[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                if (s[i] == '\\' && i + 1 < s.size()) {
                    char e = s[i + 1];
                    text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    i += 2;
                    continue;
                }
                text += s[i++];
            }
            if (!closed) {
                out.report.error("E-LEX", "unterminated string literal", source.locate(start));
                continue;
            }
            push(TokenKind::String, std::move(text), start);
            continue;
        }
        static const char* const kPunct[] = {"<->", ":=", "==", "!=", "<=", ">=", "=>", "{", "}", "(", ")", "[",
                                             "]",   ",",  ":",  "=",  "<",  ">",  "+",  "-", "*", "/"};
        bool matched = false;
        for (const char* p : kPunct) {
            std::string_view pv(p);
            if (s.compare(i, pv.size(), pv) == 0) {
                push(TokenKind::Punct, std::string(pv), start);
                i += pv.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.report.error("E-LEX", std::string("unexpected character '") + c + "'", source.locate(start));
            ++i;
        }
    }
    out.tokens.push_back({TokenKind::End, "", source.locate(s.size())});
    return out;
}

}  // namespace masforge
