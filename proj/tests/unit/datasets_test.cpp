#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "lqas/datasets.hpp"
#include "lqas/error.hpp"

using namespace lqas;

namespace {

Dataset small_table() {
    Dataset ds;
    ds.X = Matrix(3, 2);
    ds.X(0, 0) = 0.0;
    ds.X(1, 0) = 5.0;
    ds.X(2, 0) = 10.0;
    ds.X(0, 1) = -1.0;
    ds.X(1, 1) = 0.25;
    ds.X(2, 1) = 1.0;
    ds.y = {3.0, -7.5, 0.1};
    ds.feature_names = {"a", "b"};
    ds.target_name = "t";
    return ds;
}

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Quadratic1d, NoiselessTargetIsSquare) {
    Quadratic1dOptions opts;
    opts.noise = 0.0;
    const Dataset ds = gen_quadratic_1d(opts, 3);
    ASSERT_EQ(ds.size(), 500u);
    ASSERT_EQ(ds.n_features(), 4u);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double x = ds.X(i, 0);
        EXPECT_GT(x, -2.0);
        EXPECT_LT(x, 2.0);
        EXPECT_EQ(ds.y[i], x * x);
        for (std::size_t c = 1; c < 4; ++c) {
            EXPECT_EQ(ds.X(i, c), x);
        }
    }
}

TEST(Quadratic1d, DeterministicInSeed) {
    const Dataset a = gen_quadratic_1d({}, 11);
    const Dataset b = gen_quadratic_1d({}, 11);
    const Dataset c = gen_quadratic_1d({}, 12);
    EXPECT_EQ(a.X, b.X);
    EXPECT_EQ(a.y, b.y);
    EXPECT_NE(a.y, c.y);
}

TEST(Quadratic1d, ResidualVarianceWithinChiSquareBounds) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        const Dataset ds = gen_quadratic_1d({}, seed);
        std::vector<double> r(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            r[i] = ds.y[i] - ds.X(i, 0) * ds.X(i, 0);
        }
        const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
        double ss = 0.0;
        for (double v : r) {
            ss += (v - mean) * (v - mean);
        }
        const double var = ss / (r.size() - 1);
        EXPECT_GE(var, 0.18);
        EXPECT_LE(var, 0.33);
    }
}

TEST(Quadratic1d, VarianceNoiseScale) {
    Quadratic1dOptions opts;
    opts.noise = 0.25;
    opts.noise_scale = NoiseScale::Variance;
    opts.replicas = 2;
    const Dataset v = gen_quadratic_1d(opts, 5);
    opts.noise = 0.5;
    opts.noise_scale = NoiseScale::StdDev;
    const Dataset s = gen_quadratic_1d(opts, 5);
    EXPECT_EQ(v.y, s.y);
    EXPECT_EQ(v.n_features(), 2u);
}

TEST(Quadratic2d, Shape) {
    Quadratic2dOptions opts;
    opts.noise = 0.0;
    const Dataset ds = gen_quadratic_2d(opts, 1);
    ASSERT_EQ(ds.size(), 200u);
    ASSERT_EQ(ds.n_features(), 2u);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double x = ds.X(i, 0), y = ds.X(i, 1);
        EXPECT_TRUE(x > -1 && x < 1 && y > -1 && y < 1);
        EXPECT_EQ(ds.y[i], x * x + y * y);
        EXPECT_LT(ds.y[i], 2.0);
    }
    EXPECT_EQ(gen_quadratic_2d({}, 4).y, gen_quadratic_2d({}, 4).y);
}

TEST(Table, ParsesFeaturesInFileOrder) {
    const std::string text =
        "f1,f2,target,f3,f4,f5\n"
        "1,2,10,3,4,5\n"
        "6,7,20,8,9,10\n"
        "\"11\",12,30,13,14,1.5e1\n";
    const Dataset ds = parse_table(text, "target");
    EXPECT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.n_features(), 5u);
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"f1", "f2", "f3", "f4", "f5"}));
    EXPECT_EQ(ds.y, (std::vector<double>{10, 20, 30}));
    EXPECT_EQ(ds.X(1, 2), 8.0);
    EXPECT_EQ(ds.X(2, 0), 11.0);
    EXPECT_EQ(ds.X(2, 4), 15.0);
}

TEST(Table, CrlfAndQuotedHeader) {
    const Dataset ds = parse_table("\"a,b\",y\r\n1,2\r\n3,4\r\n", "y");
    EXPECT_EQ(ds.feature_names[0], "a,b");
    EXPECT_EQ(ds.size(), 2u);
}

TEST(Table, Errors) {
    EXPECT_THROW(parse_table("a,b\n1,2\n", "y"), ParseError);
    EXPECT_THROW(parse_table("", "y"), ParseError);
    const auto bad_cell = message_of([] { parse_table("a,y\n1,2\n3,abc\n", "y"); });
    EXPECT_NE(bad_cell.find("row 3"), std::string::npos) << bad_cell;
    EXPECT_NE(bad_cell.find("column 2"), std::string::npos) << bad_cell;
    const auto ragged = message_of([] { parse_table("a,y\n1,2\n3\n", "y"); });
    EXPECT_NE(ragged.find("row 3"), std::string::npos) << ragged;
    EXPECT_THROW(load_table("/nonexistent/dir/file.csv", "y"), IoError);
}

TEST(Table, SaveLoadRoundTrip) {
    Dataset ds = gen_quadratic_2d({}, 8);
    const auto path = std::filesystem::temp_directory_path() / "lqas_roundtrip_table.csv";
    save_table(path, ds);
    const Dataset back = load_table(path, "z");
    std::filesystem::remove(path);
    EXPECT_EQ(back.X, ds.X);
    EXPECT_EQ(back.y, ds.y);
    EXPECT_EQ(back.feature_names, ds.feature_names);
}

TEST(Scaling, MapsRangeOntoUnitInterval) {
    const Dataset s = fit_minmax_and_scale(small_table());
    EXPECT_DOUBLE_EQ(s.X(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(s.X(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(s.X(2, 0), 1.0);
    // Column b already spans [-1, 1].
    EXPECT_DOUBLE_EQ(s.X(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(s.X(1, 1), 0.25);
    EXPECT_DOUBLE_EQ(s.X(2, 1), 1.0);
    ASSERT_TRUE(s.scaling.has_value());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_GE(s.y[i], -1.0);
        EXPECT_LE(s.y[i], 1.0);
    }
}

TEST(Scaling, InverseRecoversTargets) {
    const Dataset raw = gen_quadratic_1d({}, 21);
    const Dataset s = fit_minmax_and_scale(raw);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        EXPECT_NEAR(s.scaling->unscale_target(s.y[i]), raw.y[i], 1e-12);
        EXPECT_NEAR(s.scaling->scale_target(raw.y[i]), s.y[i], 1e-12);
    }
    for (std::size_t c = 0; c < raw.n_features(); ++c) {
        const auto& cr = s.scaling->features[c];
        for (std::size_t i = 0; i < raw.size(); ++i) {
            EXPECT_NEAR(cr.min + (s.X(i, c) + 1) * (cr.max - cr.min) / 2, raw.X(i, c), 1e-12);
        }
    }
}

TEST(Scaling, ConstantColumnIsNamed) {
    Dataset ds = small_table();
    for (std::size_t r = 0; r < 3; ++r) {
        ds.X(r, 1) = 4.0;
    }
    const auto msg = message_of([&] { fit_minmax_and_scale(ds); });
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
    EXPECT_THROW(fit_minmax(ds), ScalingError);
}

TEST(Scaling, FitOnSubsetAndJsonRoundTrip) {
    const Dataset ds = small_table();
    const std::vector<std::size_t> rows{0, 1};
    const ScalingRecord rec = fit_minmax(ds, rows);
    EXPECT_EQ(rec.features[0].max, 5.0);
    const ScalingRecord back = scaling_from_json(scaling_to_json(rec));
    ASSERT_EQ(back.features.size(), 2u);
    EXPECT_EQ(back.features[1].name, "b");
    EXPECT_EQ(back.features[1].min, rec.features[1].min);
    EXPECT_EQ(back.target.max, rec.target.max);
    EXPECT_EQ(back.target.name, "t");
    const auto j = scaling_to_json(rec);
    EXPECT_TRUE(j.contains("features"));
    EXPECT_TRUE(j.at("target").contains("min"));
}

TEST(SplitTest, Counts) {
    const Split s = split(500, 0.8, 1);
    EXPECT_EQ(s.train.size(), 400u);
    EXPECT_EQ(s.validation.size(), 100u);
    const Split t = split(10, 0.8, 1);
    EXPECT_EQ(t.train.size(), 8u);
    EXPECT_EQ(t.validation.size(), 2u);
}

TEST(SplitTest, DisjointCoverAndDeterministic) {
    const Split s = split(137, 0.7, 42);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.validation.begin(), s.validation.end());
    EXPECT_EQ(all.size(), 137u);
    EXPECT_EQ(*all.rbegin(), 136u);
    const Split again = split(137, 0.7, 42);
    EXPECT_EQ(s.train, again.train);
    EXPECT_EQ(s.validation, again.validation);
    EXPECT_NE(split(137, 0.7, 43).train, s.train);
}

TEST(SplitTest, Errors) {
    EXPECT_THROW(split(10, 0.0, 1), ConfigError);
    EXPECT_THROW(split(10, 1.0, 1), ConfigError);
    EXPECT_THROW(split(10, -0.5, 1), ConfigError);
    EXPECT_THROW(split(1, 0.5, 1), ConfigError);
}

TEST(TakeRows, SelectsInOrder) {
    const Dataset ds = small_table();
    const std::vector<std::size_t> rows{2, 0};
    const Samples s = take_rows(ds, rows);
    EXPECT_EQ(s.y, (std::vector<double>{0.1, 3.0}));
    EXPECT_EQ(s.X(0, 0), 10.0);
}
