#include "approxsel/sqlgen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>

#include "approxsel/error.hpp"

namespace approxsel {

namespace {

constexpr std::array kTokenizers{"tokenize_qgrams", "tokenize_words", "tokenize_word_qgrams"};
constexpr std::array kPredicateTemplates{
    "intersect", "jaccard", "weighted_match", "weighted_jaccard", "cosine", "bm25", "lm",
    "hmm",       "edit",    "ges",            "ges_jaccard",      "ges_apx", "soft_tfidf"};

using Vars = std::map<std::string, std::string, std::less<>>;

// Replaces every {NAME} with vars[NAME].
std::string render(std::string_view tmpl, const Vars& vars) {
  std::string out;
  out.reserve(tmpl.size() + 64);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      const auto key = tmpl.substr(i + 1, close - i - 1);
      const auto it = vars.find(key);
      if (close == std::string_view::npos || it == vars.end()) {
        fail("internal", "unbound template variable " + std::string(key));
      }
      out += it->second;
      i = close + 1;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

// Character q-grams of a column, as the INSERT body over an INTEGERS table.
std::string qgram_select(const SqlTemplateParams& p, std::string_view id_expr,
                         std::string_view column, std::string_view from_table) {
  const std::string folded =
      p.case_fold ? "UPPER(" + std::string(column) + ")" : std::string(column);
  const std::string q = std::to_string(p.q);
  if (!p.padded) {
    return "SELECT " + std::string(id_expr) + "SUBSTRING(" + folded + ", INTEGERS.i, " + q +
           ")\nFROM   INTEGERS INNER JOIN " + std::string(from_table) +
           "\n       ON INTEGERS.i <= LENGTH(" + std::string(column) + ") - " + q + " + 1";
  }
  const std::string pads = "'" + std::string(static_cast<std::size_t>(p.q - 1), p.pad) + "'";
  const std::string replaced = "REPLACE(" + folded + ", ' ', " + pads + ")";
  return "SELECT " + std::string(id_expr) + "SUBSTRING(CONCAT(" + pads + ", " + replaced + ", " +
         pads + "), INTEGERS.i, " + q + ")\nFROM   INTEGERS INNER JOIN " +
         std::string(from_table) + "\n       ON INTEGERS.i <= LENGTH(REPLACE(" +
         std::string(column) + ", ' ', " + pads + ")) + " + std::to_string(p.q - 1);
}

std::string header(std::string_view name, SqlPhase phase) {
  return "-- approxsel: " + std::string(name) + " (" + std::string(sql_phase_name(phase)) + ")\n";
}

constexpr std::string_view kIntegers =
    "-- placeholder: fill INTEGERS(i) with the values 1 .. {IMAX}\n"
    "-- (maximum string length {MAXLEN} plus {QM1} padding positions).\n";

// Whitespace splitting is dialect specific; the Appendix chain of
// LOCATE/SUBSTRING unions is kept as a single documented placeholder.
constexpr std::string_view kWordSplit =
    "-- placeholder: SPLIT_WORDS(s) yields one row per maximal run of non-blank\n"
    "-- characters of s, in order, duplicates kept.\n";

constexpr std::string_view kNoPreprocessing =
    "-- no preprocessing beyond BASE_TOKENS (see tokenize_qgrams).\n";

constexpr std::string_view kJaccardPre = R"(INSERT INTO BASE_DDL(tid, ddl)
SELECT   T.tid, COUNT(DISTINCT T.token)
FROM     BASE_TOKENS T
GROUP BY T.tid;

INSERT INTO BASE_TOKENSDDL(tid, token, ddl)
SELECT DISTINCT T.tid, T.token, D.ddl
FROM   BASE_TOKENS T, BASE_DDL D
WHERE  T.tid = D.tid;
)";

constexpr std::string_view kSizeTf = R"(INSERT INTO BASE_SIZE(size)
SELECT COUNT(*)
FROM   {TABLE};

INSERT INTO BASE_TF(tid, token, tf)
SELECT   T.tid, T.token, COUNT(*)
FROM     BASE_TOKENS T
GROUP BY T.tid, T.token;
)";

constexpr std::string_view kBmIdf = R"(
INSERT INTO BASE_BMIDF(token, midf)
SELECT   T.token, LOG(S.size - COUNT(T.tid) + 0.5) - LOG(COUNT(T.tid) + 0.5)
FROM     BASE_TF T, BASE_SIZE S
GROUP BY T.token, S.size;
)";

constexpr std::string_view kIdf = R"(
INSERT INTO BASE_IDF(token, idf)
SELECT   T.token, LOG(S.size) - LOG(COUNT(DISTINCT T.tid))
FROM     BASE_TOKENS T, BASE_SIZE S
GROUP BY T.token, S.size;
)";

constexpr std::string_view kWeightedMatchPre = R"(
INSERT INTO BASE_WEIGHTS(tid, token, weight)
SELECT T.tid, T.token, I.midf
FROM   BASE_BMIDF I, BASE_TF T
WHERE  I.token = T.token;
)";

constexpr std::string_view kWeightedMatchQuery = R"(INSERT INTO WEIGHTEDMATCH_RESULTS(tid, score)
SELECT   W1.tid, SUM(W1.weight)
FROM     BASE_WEIGHTS W1,
         (SELECT DISTINCT token FROM QUERY_TOKENS) T2
WHERE    W1.token = T2.token
GROUP BY W1.tid;
)";

constexpr std::string_view kWeightedJaccardPre = R"(
INSERT INTO BASE_WEIGHTS(tid, token, weight)
SELECT T.tid, T.token, I.midf
FROM   BASE_BMIDF I, BASE_TF T
WHERE  I.token = T.token;

INSERT INTO BASE_DDL(tid, ddl)
SELECT   W.tid, SUM(W.weight)
FROM     BASE_WEIGHTS W
GROUP BY W.tid;

INSERT INTO BASE_TOKENSDDL(tid, token, ddl, weight)
SELECT W.tid, W.token, D.ddl, W.weight
FROM   BASE_WEIGHTS W, BASE_DDL D
WHERE  W.tid = D.tid;
)";

constexpr std::string_view kWeightedJaccardQuery = R"(INSERT INTO WJ_RESULTS(tid, score)
SELECT   S1.tid,
         CASE WHEN S1.ddl + S2.ddl - SUM(S1.weight) = 0 THEN 0
              ELSE SUM(S1.weight) / (S1.ddl + S2.ddl - SUM(S1.weight)) END
FROM     BASE_TOKENSDDL S1,
         (SELECT DISTINCT token FROM QUERY_TOKENS) R2,
         (SELECT COALESCE(SUM(I.midf), 0) AS ddl
          FROM   BASE_BMIDF I, (SELECT DISTINCT token FROM QUERY_TOKENS) T
          WHERE  I.token = T.token) S2
WHERE    S1.token = R2.token
GROUP BY S1.tid, S1.ddl, S2.ddl;
)";

constexpr std::string_view kCosinePre = R"(
INSERT INTO BASE_LENGTH(tid, len)
SELECT   T.tid, SQRT(SUM(I.idf * I.idf * T.tf * T.tf))
FROM     BASE_IDF I, BASE_TF T
WHERE    I.token = T.token
GROUP BY T.tid;

INSERT INTO BASE_WEIGHTS(tid, token, weight)
SELECT T.tid, T.token, CASE WHEN L.len = 0 THEN 0 ELSE I.idf * T.tf / L.len END
FROM   BASE_IDF I, BASE_TF T, BASE_LENGTH L
WHERE  I.token = T.token AND T.tid = L.tid;
)";

constexpr std::string_view kQueryTfIdf = R"(CREATE VIEW QUERY_TFIDF(token, w) AS
SELECT   T.token, R.idf * COUNT(*)
FROM     QUERY_TOKENS T, BASE_IDF R
WHERE    T.token = R.token
GROUP BY T.token, R.idf;

)";

constexpr std::string_view kCosineQuery = R"(INSERT INTO COSINE_RESULTS(tid, score)
SELECT   R1W.tid, SUM(R1W.weight * R2W.weight)
FROM     BASE_WEIGHTS R1W,
         (SELECT QW.token,
                 CASE WHEN QLEN.len = 0 THEN 0 ELSE QW.w / QLEN.len END AS weight
          FROM   QUERY_TFIDF QW,
                 (SELECT SQRT(SUM(w * w)) AS len FROM QUERY_TFIDF) QLEN) R2W
WHERE    R1W.token = R2W.token
GROUP BY R1W.tid;
)";

constexpr std::string_view kBm25Pre = R"(
INSERT INTO BASE_BMBASELENGTH(tid, len)
SELECT   T.tid, SUM(T.tf)
FROM     BASE_TF T
GROUP BY T.tid;

INSERT INTO BASE_BMBASEAVGLENGTH(avglen)
SELECT AVG(len)
FROM   BASE_BMBASELENGTH;

INSERT INTO BASE_BMBASEMODTF(tid, token, mtf)
SELECT T.tid, T.token,
       (T.tf * ({K1} + 1)) / ((((1 - {B}) + ({B} * L.len / A.avglen)) * {K1}) + T.tf)
FROM   BASE_BMBASELENGTH L, BASE_BMBASEAVGLENGTH A, BASE_TF T
WHERE  L.tid = T.tid;

INSERT INTO BASE_BMBASEWEIGHTS(tid, token, weight)
SELECT T.tid, T.token, T.mtf * I.midf
FROM   BASE_BMBASEMODTF T, BASE_BMIDF I
WHERE  T.token = I.token;
)";

constexpr std::string_view kBm25Query = R"(INSERT INTO BM25_RESULTS(tid, score)
SELECT   B.tid, SUM(B.weight * S.mtf)
FROM     BASE_BMBASEWEIGHTS B,
         (SELECT   token, COUNT(*) * {K3P1} / ({K3} + COUNT(*)) AS mtf
          FROM     QUERY_TOKENS T
          GROUP BY T.token) S
WHERE    B.token = S.token
GROUP BY B.tid;
)";

constexpr std::string_view kLmPre = R"(INSERT INTO BASE_TF(tid, token, tf)
SELECT   T.tid, T.token, COUNT(*)
FROM     BASE_TOKENS T
GROUP BY T.tid, T.token;

INSERT INTO BASE_DL(tid, dl)
SELECT   T.tid, COUNT(*)
FROM     BASE_TOKENS T
GROUP BY T.tid;

INSERT INTO BASE_PML(tid, token, pml)
SELECT T.tid, T.token, 1.0 * T.tf / D.dl
FROM   BASE_TF T, BASE_DL D
WHERE  T.tid = D.tid;

INSERT INTO BASE_PAVG(token, pavg)
SELECT   P.token, AVG(P.pml)
FROM     BASE_PML P
GROUP BY P.token;

INSERT INTO BASE_FREQ(tid, token, freq)
SELECT T.tid, T.token, P.pavg * D.dl
FROM   BASE_TF T, BASE_PAVG P, BASE_DL D
WHERE  T.token = P.token AND T.tid = D.tid;

INSERT INTO BASE_RISK(tid, token, risk)
SELECT T.tid, T.token, (1.0 / (1.0 + Q.freq)) * POWER(Q.freq / (1.0 + Q.freq), T.tf)
FROM   BASE_TF T, BASE_FREQ Q
WHERE  T.tid = Q.tid AND T.token = Q.token;

INSERT INTO BASE_TSIZE(size)
SELECT COUNT(*)
FROM   BASE_TOKENS;

INSERT INTO BASE_CFCS(token, cfcs)
SELECT   T.token, 1.0 * COUNT(*) / S.size
FROM     BASE_TOKENS T, BASE_TSIZE S
GROUP BY T.token, S.size;

-- pm is clamped to [1e-12, 1 - 1e-12] so that LOG(1.0 - pm) stays finite.
INSERT INTO BASE_PM(tid, token, pm, cfcs)
SELECT T.tid, T.token,
       CASE WHEN X.pm < 1e-12 THEN 1e-12
            WHEN X.pm > 1 - 1e-12 THEN 1 - 1e-12
            ELSE X.pm END,
       C.cfcs
FROM   BASE_TF T, BASE_CFCS C,
       (SELECT R.tid, R.token, POWER(M.pml, 1.0 - R.risk) * POWER(A.pavg, R.risk) AS pm
        FROM   BASE_RISK R, BASE_PML M, BASE_PAVG A
        WHERE  R.tid = M.tid AND R.token = M.token AND R.token = A.token) X
WHERE  T.tid = X.tid AND T.token = X.token AND T.token = C.token;

INSERT INTO BASE_SUMCOMPMBASE(tid, sumcompm)
SELECT   P.tid, SUM(LOG(1.0 - P.pm))
FROM     BASE_PM P
GROUP BY P.tid;
)";

constexpr std::string_view kLmQuery = R"(INSERT INTO LM_RESULTS(tid, score)
SELECT B1.tid, EXP(B1.score + B2.sumcompm)
FROM   (SELECT   P1.tid,
                 SUM(LOG(P1.pm)) - SUM(LOG(1.0 - P1.pm)) - SUM(LOG(P1.cfcs)) AS score
        FROM     BASE_PM P1, QUERY_TOKENS T2
        WHERE    P1.token = T2.token
        GROUP BY P1.tid) B1,
       BASE_SUMCOMPMBASE B2
WHERE  B1.tid = B2.tid;
)";

constexpr std::string_view kHmmPre = R"(INSERT INTO BASE_TF(tid, token, tf)
SELECT   T.tid, T.token, COUNT(*)
FROM     BASE_TOKENS T
GROUP BY T.tid, T.token;

INSERT INTO BASE_DL(tid, dl)
SELECT   T.tid, COUNT(*)
FROM     BASE_TOKENS T
GROUP BY T.tid;

INSERT INTO BASE_PML(tid, token, pml)
SELECT F.tid, F.token, 1.0 * F.tf / D.dl
FROM   BASE_TF F, BASE_DL D
WHERE  F.tid = D.tid;

INSERT INTO BASE_SUMDL(sdl)
SELECT SUM(T.dl)
FROM   BASE_DL T;

INSERT INTO BASE_PTGE(token, ptge)
SELECT   T.token, 1.0 * SUM(T.tf) / D.sdl
FROM     BASE_TF T, BASE_SUMDL D
GROUP BY T.token, D.sdl;

INSERT INTO BASE_WEIGHTSHMM(tid, token, weight)
SELECT M.tid, M.token, LOG(1 + ((1 - {A0}) * M.pml) / ({A0} * P.ptge))
FROM   BASE_PTGE P, BASE_PML M
WHERE  P.token = M.token;
)";

constexpr std::string_view kHmmQuery = R"(INSERT INTO HMM_RESULTS(tid, score)
SELECT   W1.tid, EXP(SUM(W1.weight))
FROM     BASE_WEIGHTSHMM W1, QUERY_TOKENS T2
WHERE    W1.token = T2.token
GROUP BY W1.tid;
)";

constexpr std::string_view kEditPre = R"(INSERT INTO BASE_LENGTH(tid, len)
SELECT {TID}, LENGTH({STR})
FROM   {TABLE};

-- Character q-grams padded at both ends only (whitespace is kept).
INSERT INTO BASE_EDITQGRAMS(tid, qgram, tf)
SELECT   G.tid, G.qgram, COUNT(*)
FROM     (SELECT {TID} AS tid,
                 SUBSTRING(CONCAT({PADS}, {FOLDSTR}, {PADS}), INTEGERS.i, {Q}) AS qgram
          FROM   INTEGERS INNER JOIN {TABLE}
                 ON INTEGERS.i <= LENGTH({STR}) + {QM1}) G
GROUP BY G.tid, G.qgram;
)";

constexpr std::string_view kEditQuery = R"(INSERT INTO QUERY_LENGTH(len)
SELECT LENGTH(string)
FROM   QUERY_TABLE;

INSERT INTO QUERY_EDITQGRAMS(qgram, tf)
SELECT   G.qgram, COUNT(*)
FROM     (SELECT SUBSTRING(CONCAT({PADS}, {FOLDQUERY}, {PADS}), INTEGERS.i, {Q}) AS qgram
          FROM   INTEGERS INNER JOIN QUERY_TABLE
                 ON INTEGERS.i <= LENGTH(string) + {QM1}) G
GROUP BY G.qgram;

CREATE VIEW EDIT_BOUNDS(tid, lendiff, k, bound) AS
SELECT L.tid, ABS(L.len - QL.len), K.k, K.maxlen + {QM1} - K.k * {Q}
FROM   BASE_LENGTH L, QUERY_LENGTH QL,
       (SELECT L2.tid,
               CASE WHEN L2.len > QL2.len THEN L2.len ELSE QL2.len END AS maxlen,
               CEILING((1 - {EDIT_THETA}) *
                       CASE WHEN L2.len > QL2.len THEN L2.len ELSE QL2.len END) AS k
        FROM   BASE_LENGTH L2, QUERY_LENGTH QL2) K
WHERE  L.tid = K.tid;

-- q-gram count filter: no tuple with sim_edit >= {EDIT_THETA} is missed.
INSERT INTO EDIT_CANDIDATES(tid)
SELECT E.tid
FROM   EDIT_BOUNDS E,
       (SELECT   B.tid, SUM(CASE WHEN B.tf < Q.tf THEN B.tf ELSE Q.tf END) AS shared
        FROM     BASE_EDITQGRAMS B, QUERY_EDITQGRAMS Q
        WHERE    B.qgram = Q.qgram
        GROUP BY B.tid) S
WHERE  E.tid = S.tid AND E.lendiff <= E.k AND S.shared >= E.bound
UNION
SELECT E.tid
FROM   EDIT_BOUNDS E
WHERE  E.lendiff <= E.k AND E.bound <= 0;

-- no SQL form: sim_edit(Q, D) for each row of EDIT_CANDIDATES is computed by
-- a user-defined function; rows with sim_edit >= {EDIT_THETA} are kept.
)";

constexpr std::string_view kGesPre =
    "-- no SQL form: exact GES aligns word sequences with a dynamic program and\n"
    "-- runs as a user-defined function. Word tables: see ges_jaccard (preprocess).\n";

constexpr std::string_view kGesQuery =
    "-- no SQL form: for each tuple sharing a word q-gram with the query, a\n"
    "-- user-defined function evaluates 1 - MIN(tc(Q, D) / wt(Q), 1.0) with\n"
    "-- c_ins = {C_INS}.\n";

constexpr std::string_view kWordIdfPre = R"(INSERT INTO BASE_SIZE(size)
SELECT COUNT(*)
FROM   {TABLE};

INSERT INTO BASE_IDF(token, idf)
SELECT   T.token, LOG(S.size) - LOG(COUNT(DISTINCT T.tid))
FROM     BASE_WORDS T, BASE_SIZE S
GROUP BY T.token, S.size;

INSERT INTO BASE_IDFAVG(idfavg)
SELECT AVG(I.idf)
FROM   BASE_IDF I;
)";

constexpr std::string_view kGesJaccardPre = R"(
INSERT INTO BASE_TOKENSIZE(tid, token, size)
SELECT   T.tid, T.token, COUNT(*)
FROM     BASE_QGRAMS T
GROUP BY T.tid, T.token;

INSERT INTO BASE_QGRAMSTOKENSIZE(tid, token, qgram, size)
SELECT T.tid, T.token, T.qgram, S.size
FROM   BASE_QGRAMS T, BASE_TOKENSIZE S
WHERE  T.tid = S.tid AND T.token = S.token;
)";

constexpr std::string_view kQueryIdf = R"(CREATE VIEW QUERY_IDF(token, idf) AS
SELECT DISTINCT S.token, R.idf
FROM   QUERY_WORDS S, BASE_IDF R
WHERE  S.token = R.token
UNION
SELECT DISTINCT S.token, A.idfavg
FROM   QUERY_WORDS S, BASE_IDFAVG A
WHERE  S.token NOT IN (SELECT I.token FROM BASE_IDF I);

)";

// Shared tail of both GES filters. Query words without any similar tuple word
// contribute the floor term (1 - 1/q).
constexpr std::string_view kGesFilterTail = R"(INSERT INTO {RESULTS}(tid, score)
SELECT G.tid, G.score
FROM   (SELECT   MAXSIM.tid,
                 (SI.sumidf * (1 - 1.0/{Q})
                  + SUM(QIDF.idf * (CASE WHEN (2.0/{Q}) * MAXSIM.maxsim + (1 - 1.0/{Q}) > 1.0
                                         THEN 1.0
                                         ELSE (2.0/{Q}) * MAXSIM.maxsim + (1 - 1.0/{Q}) END
                                    - (1 - 1.0/{Q})))) / SI.sumidf AS score
        FROM     ({MAXSIM}) MAXSIM,
                 QUERY_IDF QIDF,
                 (SELECT SUM(idf) AS sumidf FROM QUERY_IDF) SI
        WHERE    MAXSIM.token2 = QIDF.token AND SI.sumidf > 0
        GROUP BY MAXSIM.tid, SI.sumidf) G
WHERE  G.score >= {GES_THETA};
)";

constexpr std::string_view kJaccardMaxsim = R"(SELECT   JAC_SIM.tid, JAC_SIM.token2, MAX(JAC_SIM.sim) AS maxsim
                  FROM     (SELECT   B.tid, B.token AS token1, Q.token AS token2,
                                     1.0 * COUNT(*) / (B.size + QSIZE.size - COUNT(*)) AS sim
                            FROM     BASE_QGRAMSTOKENSIZE B, QUERY_QGRAMS Q,
                                     (SELECT token, COUNT(*) AS size
                                      FROM QUERY_QGRAMS GROUP BY token) QSIZE
                            WHERE    B.qgram = Q.qgram AND Q.token = QSIZE.token
                            GROUP BY B.tid, B.token, Q.token, B.size, QSIZE.size) JAC_SIM
                  GROUP BY JAC_SIM.tid, JAC_SIM.token2)";

constexpr std::string_view kGesApxPre = R"(
-- placeholder: BASE_HASHFUNC(fid, a, b) holds {H} seeded (odd a, b) pairs and
-- HASH_QGRAM(a, b, qgram) = ((a * FNV1A64(qgram) + b) mod 2^64) / 2^32; this
-- replaces the MySQL-specific CONV/HEX construction.
INSERT INTO BASE_HASHVALUE(fid, qgram, value)
SELECT F.fid, Q.qgram, HASH_QGRAM(F.a, F.b, Q.qgram)
FROM   BASE_HASHFUNC F, (SELECT DISTINCT qgram FROM BASE_QGRAMS) Q;

INSERT INTO BASE_MINHASHSIGNATURE(tid, token, fid, value)
SELECT   Q.tid, Q.token, H.fid, MIN(H.value)
FROM     BASE_QGRAMS Q, BASE_HASHVALUE H
WHERE    Q.qgram = H.qgram
GROUP BY Q.tid, Q.token, H.fid;
)";

constexpr std::string_view kApxMaxsim = R"(SELECT   MH_SIM.tid, MH_SIM.token2, MAX(MH_SIM.sim) AS maxsim
                  FROM     (SELECT   BMHSIG.tid, BMHSIG.token AS token1,
                                     QMHSIG.token AS token2, COUNT(*) / {H}.0 AS sim
                            FROM     BASE_MINHASHSIGNATURE BMHSIG,
                                     (SELECT   Q.token, H.fid, MIN(H.value) AS value
                                      FROM     QUERY_QGRAMS Q, BASE_HASHVALUE H
                                      WHERE    Q.qgram = H.qgram
                                      GROUP BY Q.token, H.fid) QMHSIG
                            WHERE    BMHSIG.fid = QMHSIG.fid AND BMHSIG.value = QMHSIG.value
                            GROUP BY BMHSIG.tid, BMHSIG.token, QMHSIG.token) MH_SIM
                  GROUP BY MH_SIM.tid, MH_SIM.token2)";

constexpr std::string_view kSoftPre = R"(
INSERT INTO BASE_WORDTF(tid, token, tf)
SELECT   T.tid, T.token, COUNT(*)
FROM     BASE_WORDS T
GROUP BY T.tid, T.token;

INSERT INTO BASE_WORDLENGTH(tid, len)
SELECT   T.tid, SQRT(SUM(I.idf * I.idf * T.tf * T.tf))
FROM     BASE_IDF I, BASE_WORDTF T
WHERE    I.token = T.token
GROUP BY T.tid;

INSERT INTO BASE_WORDWEIGHTS(tid, token, weight)
SELECT T.tid, T.token, CASE WHEN L.len = 0 THEN 0 ELSE I.idf * T.tf / L.len END
FROM   BASE_IDF I, BASE_WORDTF T, BASE_WORDLENGTH L
WHERE  I.token = T.token AND T.tid = L.tid;
)";

constexpr std::string_view kSoftQuery = R"(CREATE VIEW QUERY_WORDWEIGHTS(token, weight) AS
SELECT QW.token, CASE WHEN QLEN.len = 0 THEN 0 ELSE QW.w / QLEN.len END
FROM   (SELECT   T.token, R.idf * COUNT(*) AS w
        FROM     QUERY_WORDS T, BASE_IDF R
        WHERE    T.token = R.token
        GROUP BY T.token, R.idf) QW,
       (SELECT SQRT(SUM(W.w * W.w)) AS len
        FROM   (SELECT   T.token, R.idf * COUNT(*) AS w
                FROM     QUERY_WORDS T, BASE_IDF R
                WHERE    T.token = R.token
                GROUP BY T.token, R.idf) W) QLEN;

-- CLOSE(theta, Q, D): strictly above theta.
CREATE VIEW CLOSE_SIM_SCORES(tid, token1, token2, sim) AS
SELECT DISTINCT R1.tid, R1.token, R2.token, JaroWinkler(R1.token, R2.token)
FROM   BASE_WORDS R1, QUERY_WORDWEIGHTS R2
WHERE  JaroWinkler(R1.token, R2.token) > {SOFT_THETA};

CREATE VIEW MAXSIM(tid, token2, maxsim) AS
SELECT   S.tid, S.token2, MAX(S.sim)
FROM     CLOSE_SIM_SCORES S
GROUP BY S.tid, S.token2;

-- Among equally similar tuple words the one with the largest weight is used.
CREATE VIEW MAXTOKEN(tid, token2, maxsim, weight) AS
SELECT   MS.tid, MS.token2, MS.maxsim, MAX(WB.weight)
FROM     MAXSIM MS, CLOSE_SIM_SCORES CS, BASE_WORDWEIGHTS WB
WHERE    CS.tid = MS.tid AND CS.token2 = MS.token2 AND CS.sim = MS.maxsim
         AND WB.tid = CS.tid AND WB.token = CS.token1
GROUP BY MS.tid, MS.token2, MS.maxsim;

INSERT INTO SOFTTFIDF_RESULTS(tid, score)
SELECT   TM.tid, SUM(WQ.weight * TM.weight * TM.maxsim)
FROM     MAXTOKEN TM, QUERY_WORDWEIGHTS WQ
WHERE    TM.token2 = WQ.token
GROUP BY TM.tid;
)";

// Real-valued literal: "8" would make COUNT(*) * 9 / (8 + COUNT(*)) an
// integer division in most engines.
std::string sql_real(double v) {
  auto s = sql_number(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Vars make_vars(const SqlTemplateParams& p) {
  Vars v;
  v["TABLE"] = p.table;
  v["TID"] = p.tid_column;
  v["STR"] = p.string_column;
  v["Q"] = std::to_string(p.q);
  v["QM1"] = std::to_string(p.q - 1);
  v["IMAX"] = std::to_string(p.max_str_size + p.q - 1);
  v["MAXLEN"] = std::to_string(p.max_str_size);
  v["PADS"] = "'" + std::string(static_cast<std::size_t>(p.q - 1), p.pad) + "'";
  v["FOLDSTR"] = p.case_fold ? "UPPER(" + p.string_column + ")" : p.string_column;
  v["FOLDQUERY"] = p.case_fold ? "UPPER(string)" : "string";
  v["K1"] = sql_real(p.k1);
  v["K3"] = sql_real(p.k3);
  v["K3P1"] = sql_real(p.k3 + 1.0);
  v["B"] = sql_real(p.b);
  v["A0"] = sql_real(p.a0);
  v["GES_THETA"] = sql_real(p.ges_theta);
  v["SOFT_THETA"] = sql_real(p.soft_theta);
  v["EDIT_THETA"] = sql_real(p.edit_theta);
  v["C_INS"] = sql_real(p.c_ins);
  v["H"] = std::to_string(p.minhash_size);
  return v;
}

std::string tokenizer_sql(std::string_view name, SqlPhase phase, const SqlTemplateParams& p,
                          const Vars& vars) {
  const bool base = phase == SqlPhase::preprocess;
  const std::string id = base ? p.tid_column + ", " : "";
  const std::string from = base ? p.table : "QUERY_TABLE";
  const std::string column = base ? p.string_column : "string";
  if (name == "tokenize_qgrams") {
    return render(kIntegers, vars) + "\nINSERT INTO " +
           (base ? "BASE_TOKENS(tid, token)\n" : "QUERY_TOKENS(token)\n") +
           qgram_select(p, id, column, from) + ";\n";
  }
  const std::string fold = p.case_fold ? "UPPER(W.token)" : "W.token";
  if (name == "tokenize_words") {
    const std::string ids = base ? "S." + p.tid_column + ", " : "";
    return std::string(kWordSplit) + "\nINSERT INTO " +
           (base ? "BASE_WORDS(tid, token)\n" : "QUERY_WORDS(token)\n") + "SELECT " + ids + fold +
           "\nFROM   " + from + " S, SPLIT_WORDS(S." + column + ") W;\n";
  }
  // tokenize_word_qgrams: per-word grams, padded around each word.
  const std::string q = std::to_string(p.q);
  const std::string words = base ? "BASE_WORDS" : "QUERY_WORDS";
  const std::string target = base ? "BASE_QGRAMS(tid, token, qgram)" : "QUERY_QGRAMS(token, qgram)";
  const std::string ids = base ? "W.tid, " : "";
  std::string gram;
  std::string bound;
  if (p.padded) {
    gram = "SUBSTRING(CONCAT(" + vars.at("PADS") + ", W.token, " + vars.at("PADS") +
           "), INTEGERS.i, " + q + ")";
    bound = "LENGTH(W.token) + " + std::to_string(p.q - 1);
  } else {
    gram = "SUBSTRING(W.token, INTEGERS.i, " + q + ")";
    bound = "LENGTH(W.token) - " + q + " + 1";
  }
  return render(kIntegers, vars) + "\nINSERT INTO " + target + "\nSELECT DISTINCT " + ids +
         "W.token, " + gram + "\nFROM   INTEGERS INNER JOIN " + words + " W\n       ON INTEGERS.i <= " +
         bound + ";\n";
}

std::string predicate_sql(std::string_view name, SqlPhase phase, const Vars& v) {
  const bool pre = phase == SqlPhase::preprocess;
  if (name == "intersect") {
    if (pre) return std::string(kNoPreprocessing);
    return "INSERT INTO INTERSECT_RESULTS(tid, score)\n"
           "SELECT   R1.tid, COUNT(*)\n"
           "FROM     (SELECT DISTINCT tid, token FROM BASE_TOKENS) R1,\n"
           "         (SELECT DISTINCT token FROM QUERY_TOKENS) R2\n"
           "WHERE    R1.token = R2.token\n"
           "GROUP BY R1.tid;\n";
  }
  if (name == "jaccard") {
    if (pre) return std::string(kJaccardPre);
    return "INSERT INTO JACCARD_RESULTS(tid, score)\n"
           "SELECT   S1.tid, 1.0 * COUNT(*) / (S1.ddl + S2.ddl - COUNT(*))\n"
           "FROM     BASE_TOKENSDDL S1,\n"
           "         (SELECT DISTINCT token FROM QUERY_TOKENS) R2,\n"
           "         (SELECT COUNT(DISTINCT token) AS ddl FROM QUERY_TOKENS) S2\n"
           "WHERE    S1.token = R2.token\n"
           "GROUP BY S1.tid, S1.ddl, S2.ddl;\n";
  }
  if (name == "weighted_match") {
    return pre ? render(kSizeTf, v) + std::string(kBmIdf) + std::string(kWeightedMatchPre)
               : std::string(kWeightedMatchQuery);
  }
  if (name == "weighted_jaccard") {
    return pre ? render(kSizeTf, v) + std::string(kBmIdf) + std::string(kWeightedJaccardPre)
               : std::string(kWeightedJaccardQuery);
  }
  if (name == "cosine") {
    return pre ? render(kSizeTf, v) + std::string(kIdf) + std::string(kCosinePre)
               : std::string(kQueryTfIdf) + std::string(kCosineQuery);
  }
  if (name == "bm25") {
    return pre ? render(kSizeTf, v) + std::string(kBmIdf) + render(kBm25Pre, v)
               : render(kBm25Query, v);
  }
  if (name == "lm") {
    return pre ? std::string(kLmPre) : std::string(kLmQuery);
  }
  if (name == "hmm") {
    return pre ? render(kHmmPre, v) : std::string(kHmmQuery);
  }
  if (name == "edit") {
    return pre ? render(kEditPre, v) : render(kEditQuery, v);
  }
  if (name == "ges") {
    return pre ? std::string(kGesPre) : render(kGesQuery, v);
  }
  if (name == "ges_jaccard") {
    if (pre) return render(kWordIdfPre, v) + std::string(kGesJaccardPre);
    Vars w = v;
    w["RESULTS"] = "GESJACCARD_RESULTS";
    w["MAXSIM"] = std::string(kJaccardMaxsim);
    return std::string(kQueryIdf) + render(kGesFilterTail, w);
  }
  if (name == "ges_apx") {
    if (pre) return render(kWordIdfPre, v) + render(kGesApxPre, v);
    Vars w = v;
    w["RESULTS"] = "GESAPX_RESULTS";
    w["MAXSIM"] = render(kApxMaxsim, v);
    return std::string(kQueryIdf) + render(kGesFilterTail, w);
  }
  // soft_tfidf
  return pre ? render(kWordIdfPre, v) + std::string(kSoftPre) : render(kSoftQuery, v);
}

}  // namespace

std::string_view sql_phase_name(SqlPhase p) noexcept {
  return p == SqlPhase::preprocess ? "preprocess" : "query";
}

SqlPhase parse_sql_phase(std::string_view name) {
  if (name == "preprocess") return SqlPhase::preprocess;
  if (name == "query") return SqlPhase::query;
  fail("invalid_argument", "unknown phase '" + std::string(name) + "'; valid: preprocess,query");
}

void SqlTemplateParams::validate() const {
  if (q < 1) fail("invalid_argument", "q must be >= 1");
  if (!(k1 > 0.0)) fail("invalid_argument", "k1 must be > 0");
  if (!(k3 >= 0.0)) fail("invalid_argument", "k3 must be >= 0");
  if (!(b >= 0.0 && b <= 1.0)) fail("invalid_argument", "b must be in [0, 1]");
  if (!(a0 > 0.0 && a0 < 1.0)) fail("invalid_argument", "a0 must be in (0, 1)");
  if (!(ges_theta >= 0.0 && ges_theta <= 1.0)) fail("invalid_argument", "GES threshold must be in [0, 1]");
  if (!(soft_theta > 0.0 && soft_theta < 1.0)) fail("invalid_argument", "SoftTFIDF threshold must be in (0, 1)");
  if (!(edit_theta > 0.0 && edit_theta <= 1.0)) fail("invalid_argument", "edit threshold must be in (0, 1]");
  if (minhash_size < 1) fail("invalid_argument", "min-hash size must be >= 1");
  if (max_str_size < 1) fail("invalid_argument", "maximum string size must be >= 1");
  if (table.empty() || tid_column.empty() || string_column.empty()) {
    fail("invalid_argument", "table and column names must be non-empty");
  }
}

std::vector<std::string> sql_template_names() {
  std::vector<std::string> out(kTokenizers.begin(), kTokenizers.end());
  out.insert(out.end(), kPredicateTemplates.begin(), kPredicateTemplates.end());
  return out;
}

std::string sql_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string emit_sql(std::string_view name, SqlPhase phase, const SqlTemplateParams& params) {
  params.validate();
  const auto names = sql_template_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string valid;
    for (const auto& n : names) {
      valid += (valid.empty() ? "" : ",") + n;
    }
    fail("unknown_template", "unknown SQL template '" + std::string(name) + "'; valid: " + valid);
  }
  const auto vars = make_vars(params);
  const bool tokenizer = std::find(kTokenizers.begin(), kTokenizers.end(), name) != kTokenizers.end();
  const auto body = tokenizer ? tokenizer_sql(name, phase, params, vars)
                              : predicate_sql(name, phase, vars);
  return header(name, phase) + body;
}

}  // namespace approxsel
