// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsd/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qsd;

TEST(io, format_full_round_trips) {
    for (double x : {0.1, 1.0 / 3.0, 2.0, -1e-300, 6.02214076e23}) {
        EXPECT_EQ(std::stod(format_full(x)), x);
    }
    EXPECT_EQ(format_full(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_text(2.0 / 3.0), "0.666666666667");
}

TEST(io, state_json_round_trip) {
    SeededRng rng(1);
    const DensityMatrix rho = random_mixed_rank(kTwoQubits, 3, rng);
    const DensityMatrix back = state_from_json(Json::parse(state_to_json(rho).dump()));
    EXPECT_EQ(back.matrix(), rho.matrix());
}

TEST(io, state_json_errors) {
    EXPECT_THROW(state_from_json(Json::parse(R"({"entries": []})")), IoError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"dims": [2, -2], "entries": []})")), IoError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"dims": [2, 2]})")), IoError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"dims": [2, 2], "entries": [[1, 0]]})")), IoError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"dims": [2, 2], "amplitudes": [[1, 0], [1, 0], [0, 0], [0, 0]]})")),
                 IoError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"dims": [2, 2], "amplitudes": [1, 0, 0, 0]})")), IoError);
}

TEST(io, ensemble_json_round_trip) {
    const Ensemble eta = Ensemble::pair(0.3, DensityMatrix::projector(basis_state(2)),
                                        DensityMatrix::maximally_mixed(kTwoQubits));
    const Ensemble back = ensemble_from_json(Json::parse(ensemble_to_json(eta).dump()));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].probability, 0.3);
    EXPECT_EQ(back[1].state.matrix(), eta[1].state.matrix());
    EXPECT_THROW(ensemble_from_json(Json::parse(R"({"items": [{"p": 0.5}]})")), IoError);
}

TEST(io, fig1_csv_schema) {
    Fig1Record r;
    r.index = 3;
    r.seed = 99;
    r.rank1 = 2;
    r.rank2 = 4;
    r.p1 = 0.25;
    r.gamma = 2.0 / 3.0;
    std::ostringstream out;
    write_fig1_csv(out, {r});
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "index,seed,rank1,rank2,is_product,p1,R1,R2,Rmax,p_eta,p_eps,gamma");
    const auto cells = split_csv_line(row);
    ASSERT_EQ(cells.size(), 12u);
    EXPECT_EQ(cells[0], "3");
    EXPECT_EQ(cells[4], "0");
    EXPECT_EQ(std::stod(cells[11]), 2.0 / 3.0);
}

TEST(io, fig2_csv_schema) {
    Fig2Record r;
    r.r = 0.073;
    r.delta_p = -0.08;
    std::ostringstream out;
    write_fig2_csv(out, {r});
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(split_csv_line(header).size(), 13u);
    EXPECT_EQ(split_csv_line(row).size(), 13u);
    EXPECT_EQ(split_csv_line(header)[1], "deltaP");
}

TEST(io, write_file_reports_unwritable_path) {
    EXPECT_THROW(write_file("/nonexistent-dir/x.csv", [](std::ostream& o) { o << "x"; }), IoError);
}
