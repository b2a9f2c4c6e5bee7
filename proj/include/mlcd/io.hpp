#ifndef MLCD_IO_HPP
#define MLCD_IO_HPP

#include <string>

#include "mlcd/integrate.hpp"
#include "mlcd/labeling.hpp"

namespace mlcd {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Columns iter,id,x1..xd; escape flags are recomputed from the guard box on
/// load, so the geometry is the whole payload.
std::string ensemble_to_csv(const OrbitEnsemble& ens);
OrbitEnsemble ensemble_from_csv(const std::string& text, const HyperRectangle& domain);

/// Columns x1..xd,label.
std::string dataset_to_csv(const LabeledDataset& ds);
LabeledDataset dataset_from_csv(const std::string& text);

/// Single column `death`.
std::string diagram_to_csv(const PersistenceDiagram0& diag);

/// Columns epoch,train_loss,test_loss.
std::string curves_to_csv(const std::vector<double>& train_losses,
                          const std::vector<double>& test_losses);

}  // namespace mlcd

#endif
