#include "forge/layers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forge/error.hpp"

namespace forge {

GraphStructure GraphStructure::build(int node_count,
                                     std::span<const std::pair<int, int>> edges) {
    if (node_count < 1) throw dim_error("graph structure needs at least one node");
    GraphStructure gs;
    gs.node_count = node_count;

    std::vector<int> degree(static_cast<std::size_t>(node_count), 0);
    std::vector<std::pair<int, int>> directed;
    directed.reserve(edges.size() * 2);
    for (auto [i, j] : edges) {
        if (i < 0 || j >= node_count || i >= j) {
            throw validation_error("invalid edge (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ") for " + std::to_string(node_count) +
                                   " nodes");
        }
        directed.emplace_back(i, j);
        directed.emplace_back(j, i);
        ++degree[static_cast<std::size_t>(i)];
        ++degree[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < node_count; ++i) {
        if (degree[static_cast<std::size_t>(i)] == 0) directed.emplace_back(i, i);
    }
    std::sort(directed.begin(), directed.end());
    if (std::adjacent_find(directed.begin(), directed.end()) != directed.end()) {
        throw validation_error("duplicate edge in edge list");
    }
    gs.edge_center.reserve(directed.size());
    gs.edge_neigh.reserve(directed.size());
    for (auto [c, n] : directed) {
        gs.edge_center.push_back(c);
        gs.edge_neigh.push_back(n);
    }

    // Symmetrically normalized adjacency with self-loops for graph
    // convolution: value 1/sqrt((deg_i+1)(deg_j+1)).
    {
        ad::SparseMatrix a;
        a.rows = a.cols = node_count;
        a.row_ptr.assign(static_cast<std::size_t>(node_count) + 1, 0);
        std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(node_count));
        for (auto [i, j] : edges) {
            nbrs[static_cast<std::size_t>(i)].push_back(j);
            nbrs[static_cast<std::size_t>(j)].push_back(i);
        }
        for (int i = 0; i < node_count; ++i) {
            auto& v = nbrs[static_cast<std::size_t>(i)];
            v.push_back(i);  // self-loop
            std::sort(v.begin(), v.end());
        }
        for (int i = 0; i < node_count; ++i) {
            a.row_ptr[static_cast<std::size_t>(i) + 1] =
                a.row_ptr[static_cast<std::size_t>(i)] +
                static_cast<int>(nbrs[static_cast<std::size_t>(i)].size());
        }
        for (int i = 0; i < node_count; ++i) {
            const double di = degree[static_cast<std::size_t>(i)] + 1.0;
            for (int j : nbrs[static_cast<std::size_t>(i)]) {
                const double dj = degree[static_cast<std::size_t>(j)] + 1.0;
                a.col_idx.push_back(j);
                a.vals.push_back(1.0 / std::sqrt(di * dj));
            }
        }
        gs.gcn_adj = ad::make_symmetric_sp_pair(std::move(a));
    }

    // Row-stochastic neighbor-mean operator (no self-loops). Isolated nodes
    // get an empty row, i.e. a zero neighbor term.
    {
        ad::SparseMatrix a;
        a.rows = a.cols = node_count;
        a.row_ptr.assign(static_cast<std::size_t>(node_count) + 1, 0);
        std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(node_count));
        for (auto [i, j] : edges) {
            nbrs[static_cast<std::size_t>(i)].push_back(j);
            nbrs[static_cast<std::size_t>(j)].push_back(i);
        }
        for (int i = 0; i < node_count; ++i) {
            auto& v = nbrs[static_cast<std::size_t>(i)];
            std::sort(v.begin(), v.end());
            a.row_ptr[static_cast<std::size_t>(i) + 1] =
                a.row_ptr[static_cast<std::size_t>(i)] + static_cast<int>(v.size());
            for (int j : v) {
                a.col_idx.push_back(j);
                a.vals.push_back(1.0 / static_cast<double>(v.size()));
            }
        }
        gs.mean_adj = ad::make_sp_pair(std::move(a));
    }
    return gs;
}

namespace {
void check_node_rows(const char* layer, const ad::TensorPtr& h, const GraphStructure& gs) {
    if (h->rows != gs.node_count) {
        throw dim_error(std::string(layer) + ": features " + h->shape_str() + " vs graph with " +
                        std::to_string(gs.node_count) + " nodes");
    }
}

}  // namespace

ad::TensorPtr graph_conv_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                 const GraphStructure& gs, const ad::TensorPtr& w,
                                 const ad::TensorPtr& b) {
    check_node_rows("graph_conv", h, gs);
    auto agg = ad::spmm(tape, gs.gcn_adj, h);
    return ad::add_row_bias(tape, ad::matmul(tape, agg, w), b);
}

ad::TensorPtr sage_conv_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                const GraphStructure& gs, const ad::TensorPtr& w_self,
                                const ad::TensorPtr& w_neigh, const ad::TensorPtr& b) {
    check_node_rows("sage_conv", h, gs);
    auto neigh = ad::spmm(tape, gs.mean_adj, h);
    auto self_part = ad::matmul(tape, h, w_self);
    auto neigh_part = ad::matmul(tape, neigh, w_neigh);
    return ad::add_row_bias(tape, ad::add(tape, self_part, neigh_part), b);
}

ad::TensorPtr edge_conv_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                const GraphStructure& gs, const ad::TensorPtr& w_theta,
                                const ad::TensorPtr& b) {
    check_node_rows("edge_conv", h, gs);
    const int f = h->cols;
    if (w_theta->rows != 2 * f) {
        throw dim_error("edge_conv: W_theta " + w_theta->shape_str() + " expects " +
                        std::to_string(w_theta->rows / 2) + " input features, got " +
                        std::to_string(f));
    }
    // concat(h_i, h_j - h_i) @ W = h_i @ W_top + (h_j - h_i) @ W_bot with
    // W_top / W_bot the upper and lower halves of W_theta. Splitting via
    // gather keeps the parameter a single 2F x F' tensor.
    std::vector<int> top(static_cast<std::size_t>(f)), bot(static_cast<std::size_t>(f));
    std::iota(top.begin(), top.end(), 0);
    std::iota(bot.begin(), bot.end(), f);
    auto w_top = ad::gather_rows(tape, w_theta, top);
    auto w_bot = ad::gather_rows(tape, w_theta, bot);
    auto center_term = ad::matmul(tape, h, w_top);  // N x F'
    auto diff_term = ad::matmul(tape, h, w_bot);    // N x F'
    auto msg = ad::add(tape, ad::gather_rows(tape, center_term, gs.edge_center),
                       ad::sub(tape, ad::gather_rows(tape, diff_term, gs.edge_neigh),
                               ad::gather_rows(tape, diff_term, gs.edge_center)));
    msg = ad::add_row_bias(tape, msg, b);
    return ad::segment_max(tape, msg, gs.edge_center, gs.node_count);
}

ad::TensorPtr node_linear_forward(ad::Tape* tape, const ad::TensorPtr& h,
                                  const ad::TensorPtr& w, const ad::TensorPtr& b) {
    if (h->rows != w->cols) {
        throw dim_error("node_linear: layer is bound to one die topology with " +
                        std::to_string(w->cols) + " nodes, got a graph with " +
                        std::to_string(h->rows));
    }
    return ad::add_col_bias(tape, ad::matmul(tape, w, h), b);
}

}  // namespace forge
