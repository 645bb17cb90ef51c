#include "qai/lang.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

namespace qai {

namespace {

enum class Tok {
    Ident, Number, Ket,
    Semi, Comma, Eq, Assign /* := */, ApplyEq /* *= */,
    LBrace, RBrace, LParen, RParen, LBracket, RBracket,
    Plus, Minus, Star,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;     // identifier name, ket bits, or raw number
    double number = 0.0;
    int line = 1, col = 1;
    std::size_t offset = 0;
};

const std::set<std::string> kKeywords = {"qubits", "unitary", "space", "span",
                                         "skip", "assert", "on", "if", "else",
                                         "while"};

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) {}

    const Token& peek(std::size_t ahead = 0) {
        while (buffer_.size() <= ahead) buffer_.push_back(lex());
        return buffer_[ahead];
    }

    Token next() {
        Token t = peek();
        buffer_.erase(buffer_.begin());
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(line_, col_, expected);
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token make(Tok kind, std::size_t start_pos, int line, int col) {
        Token t;
        t.kind = kind;
        t.line = line;
        t.col = col;
        t.offset = start_pos;
        t.text = src_.substr(start_pos, pos_ - start_pos);
        return t;
    }

    Token lex() {
        skip_space();
        int line = line_, col = col_;
        std::size_t start = pos_;
        if (pos_ >= src_.size()) return make(Tok::End, start, line, col);

        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_'))
                bump();
            return make(Tok::Ident, start, line, col);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                bump();
            if (pos_ < src_.size() && src_[pos_] == '.') {
                bump();
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    bump();
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t save = pos_;
                int sl = line_, sc = col_;
                bump();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
                if (pos_ < src_.size() &&
                    std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        bump();
                } else {
                    pos_ = save;  // 'e' belongs to something else
                    line_ = sl;
                    col_ = sc;
                }
            }
            Token t = make(Tok::Number, start, line, col);
            t.number = std::strtod(t.text.c_str(), nullptr);
            return t;
        }
        if (c == '|') {
            bump();
            std::size_t bits_start = pos_;
            while (pos_ < src_.size() && (src_[pos_] == '0' || src_[pos_] == '1')) bump();
            if (pos_ == bits_start) fail("bit string after '|'");
            std::string bits = src_.substr(bits_start, pos_ - bits_start);
            if (pos_ >= src_.size() || src_[pos_] != '>') fail("'>' closing a ket");
            bump();
            Token t = make(Tok::Ket, start, line, col);
            t.text = bits;
            return t;
        }

        bump();
        switch (c) {
            case ';': return make(Tok::Semi, start, line, col);
            case ',': return make(Tok::Comma, start, line, col);
            case '{': return make(Tok::LBrace, start, line, col);
            case '}': return make(Tok::RBrace, start, line, col);
            case '(': return make(Tok::LParen, start, line, col);
            case ')': return make(Tok::RParen, start, line, col);
            case '[': return make(Tok::LBracket, start, line, col);
            case ']': return make(Tok::RBracket, start, line, col);
            case '+': return make(Tok::Plus, start, line, col);
            case '-': return make(Tok::Minus, start, line, col);
            case '=': return make(Tok::Eq, start, line, col);
            case ':':
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    bump();
                    return make(Tok::Assign, start, line, col);
                }
                fail("':='");
            case '*':
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    bump();
                    return make(Tok::ApplyEq, start, line, col);
                }
                return make(Tok::Star, start, line, col);
            default:
                fail("a token");
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    std::vector<Token> buffer_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Program parse_program() {
        Program p;
        expect_keyword("qubits");
        std::vector<std::string> names;
        while (peek_is_plain_ident()) names.push_back(lex_.next().text);
        if (names.empty()) fail("qubit name");
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j])
                    throw ValidationError("DuplicateQubit", cur().line, cur().col,
                                          "qubit declared twice: " + names[i]);
        p.layout = QubitLayout(names);
        expect(Tok::Semi, "';'");

        while (peek_keyword("unitary") || peek_keyword("space")) {
            if (peek_keyword("unitary"))
                parse_unitary_decl(p);
            else
                parse_space_decl(p);
        }

        while (cur().kind != Tok::End) p.body.push_back(parse_stmt());
        if (p.body.empty()) fail("a statement");
        return p;
    }

private:
    const Token& cur() { return lex_.peek(); }

    [[noreturn]] void fail(const std::string& expected) {
        throw SyntaxError(cur().line, cur().col, expected);
    }

    Token expect(Tok k, const std::string& what) {
        if (cur().kind != k) fail(what);
        return lex_.next();
    }

    bool peek_keyword(const std::string& kw, std::size_t ahead = 0) {
        const Token& t = lex_.peek(ahead);
        return t.kind == Tok::Ident && t.text == kw;
    }

    bool peek_is_plain_ident(std::size_t ahead = 0) {
        const Token& t = lex_.peek(ahead);
        return t.kind == Tok::Ident && kKeywords.count(t.text) == 0;
    }

    void expect_keyword(const std::string& kw) {
        if (!peek_keyword(kw)) fail("'" + kw + "'");
        lex_.next();
    }

    std::string expect_name() {
        if (!peek_is_plain_ident()) fail("a name");
        return lex_.next().text;
    }

    // cnum := [sign] FLOAT [ (+|-) FLOAT 'i' ]
    Cplx parse_cnum() {
        double sign = 1.0;
        if (cur().kind == Tok::Minus) {
            lex_.next();
            sign = -1.0;
        } else if (cur().kind == Tok::Plus) {
            lex_.next();
        }
        Token re = expect(Tok::Number, "a number");
        double real = sign * re.number;
        if ((cur().kind == Tok::Plus || cur().kind == Tok::Minus) &&
            lex_.peek(1).kind == Tok::Number && lex_.peek(2).kind == Tok::Ident &&
            lex_.peek(2).text == "i") {
            double is = (lex_.next().kind == Tok::Plus) ? 1.0 : -1.0;
            double imag = is * lex_.next().number;
            lex_.next();  // 'i'
            return {real, imag};
        }
        return {real, 0.0};
    }

    Matrix parse_matrix() {
        expect(Tok::LBracket, "'['");
        std::vector<std::vector<Cplx>> rows;
        for (;;) {
            expect(Tok::LBracket, "'['");
            std::vector<Cplx> row;
            for (;;) {
                row.push_back(parse_cnum());
                if (cur().kind == Tok::Comma) {
                    lex_.next();
                    continue;
                }
                break;
            }
            expect(Tok::RBracket, "']'");
            if (!rows.empty() && rows.front().size() != row.size())
                throw ValidationError("MatrixShape", cur().line, cur().col,
                                      "matrix rows have different lengths");
            rows.push_back(std::move(row));
            if (cur().kind == Tok::Comma) {
                lex_.next();
                continue;
            }
            break;
        }
        expect(Tok::RBracket, "']'");
        Matrix m(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        return m;
    }

    void parse_unitary_decl(Program& p) {
        expect_keyword("unitary");
        SourceLoc loc{cur().line, cur().col};
        std::string name = expect_name();
        expect(Tok::Eq, "'='");
        Matrix m = parse_matrix();
        expect(Tok::Semi, "';'");
        if (p.find_unitary(name))
            throw ValidationError("DuplicateName", loc.line, loc.col,
                                  "unitary declared twice: " + name);
        p.unitaries.emplace_back(name, UnitaryDecl{std::move(m), loc});
    }

    // vec := term ((+|-) term)*   term := (cnum '*')? KET
    Vector parse_vec(std::size_t& num_bits) {
        Vector v;
        bool first = true;
        double sign = 1.0;
        for (;;) {
            Cplx coeff{1.0, 0.0};
            if (cur().kind != Tok::Ket) {
                coeff = parse_cnum();
                expect(Tok::Star, "'*'");
            }
            Token ket = expect(Tok::Ket, "a ket");
            if (first) {
                num_bits = ket.text.size();
                v = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << num_bits));
                first = false;
            } else if (ket.text.size() != num_bits) {
                throw ValidationError("DimensionMismatch", ket.line, ket.col,
                                      "kets in one span must have equal lengths");
            }
            std::size_t idx = 0;
            for (char b : ket.text) idx = idx * 2 + (b == '1' ? 1 : 0);
            v(static_cast<Eigen::Index>(idx)) += sign * coeff;

            if (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
                sign = (cur().kind == Tok::Plus) ? 1.0 : -1.0;
                lex_.next();
                continue;
            }
            break;
        }
        return v;
    }

    void parse_space_decl(Program& p) {
        expect_keyword("space");
        SourceLoc loc{cur().line, cur().col};
        std::string name = expect_name();
        expect(Tok::Eq, "'='");
        expect_keyword("span");
        expect(Tok::LParen, "'('");
        SpaceDecl decl;
        decl.loc = loc;
        for (;;) {
            std::size_t bits = 0;
            Vector v = parse_vec(bits);
            if (!decl.vectors.empty() && bits != decl.num_bits)
                throw ValidationError("DimensionMismatch", cur().line, cur().col,
                                      "vectors in one span must have equal lengths");
            decl.num_bits = bits;
            decl.vectors.push_back(std::move(v));
            if (cur().kind == Tok::Comma) {
                lex_.next();
                continue;
            }
            break;
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        if (p.find_space(name))
            throw ValidationError("DuplicateName", loc.line, loc.col,
                                  "space declared twice: " + name);
        p.spaces.emplace_back(name, decl);
    }

    std::vector<std::string> parse_qlist() {
        std::vector<std::string> qs;
        qs.push_back(expect_name());
        while (cur().kind == Tok::Comma) {
            lex_.next();
            qs.push_back(expect_name());
        }
        return qs;
    }

    std::string parse_ref() {
        if (cur().kind != Tok::Ident) fail("a name");
        return lex_.next().text;
    }

    Block parse_block() {
        expect(Tok::LBrace, "'{'");
        Block b;
        while (cur().kind != Tok::RBrace) b.push_back(parse_stmt());
        if (b.empty()) fail("a statement");
        expect(Tok::RBrace, "'}'");
        return b;
    }

    Stmt parse_stmt() {
        Stmt s;
        const Token& t = cur();
        s.loc = {t.line, t.col};
        s.span.begin = t.offset;

        if (peek_keyword("skip")) {
            lex_.next();
            Token semi = expect(Tok::Semi, "';'");
            s.node = SkipStmt{};
            s.span.end = semi.offset + 1;
            return s;
        }
        if (peek_keyword("assert")) {
            lex_.next();
            std::string space = parse_ref();
            expect_keyword("on");
            auto qs = parse_qlist();
            Token semi = expect(Tok::Semi, "';'");
            s.node = AssertStmt{std::move(qs), std::move(space)};
            s.span.end = semi.offset + 1;
            return s;
        }
        if (peek_keyword("if")) {
            lex_.next();
            std::string space = parse_ref();
            expect_keyword("on");
            auto qs = parse_qlist();
            Block then_body = parse_block();
            expect_keyword("else");
            Block else_body = parse_block();
            s.node = IfStmt{std::move(qs), std::move(space), std::move(then_body),
                            std::move(else_body)};
            s.span.end = lex_.peek().offset;
            return s;
        }
        if (peek_keyword("while")) {
            lex_.next();
            std::string space = parse_ref();
            expect_keyword("on");
            auto qs = parse_qlist();
            Block body = parse_block();
            s.node = WhileStmt{std::move(qs), std::move(space), std::move(body)};
            s.span.end = lex_.peek().offset;
            return s;
        }
        if (cur().kind == Tok::Ident) {
            auto qs = parse_qlist();
            if (cur().kind == Tok::Assign) {
                lex_.next();
                Token ket = expect(Tok::Ket, "'|0>'");
                if (ket.text != "0")
                    throw SyntaxError(ket.line, ket.col, "'|0>'");
                Token semi = expect(Tok::Semi, "';'");
                s.node = InitStmt{std::move(qs)};
                s.span.end = semi.offset + 1;
                return s;
            }
            if (cur().kind == Tok::ApplyEq) {
                lex_.next();
                std::string gate = parse_ref();
                Token semi = expect(Tok::Semi, "';'");
                s.node = UnitaryStmt{std::move(qs), std::move(gate)};
                s.span.end = semi.offset + 1;
                return s;
            }
            fail("':=' or '*='");
        }
        fail("a statement");
    }

    Lexer lex_;
};

}  // namespace

Program parse_unvalidated(const std::string& text) {
    Parser parser(text);
    return parser.parse_program();
}

}  // namespace qai
