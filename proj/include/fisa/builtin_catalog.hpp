#pragma once

// The built-in security analysis guideline for in-vehicle diagnostic and
// software update systems, kept as catalog-language text so user catalogs
// and the built-in one share one loading path.

#include <stdexcept>
#include <string_view>

#include "fisa/catalog.hpp"
#include "fisa/dsl.hpp"

namespace fisa {

inline constexpr std::string_view kBuiltinCatalogText = R"cat(loss L-1 "Loss of life or cause injury to life"
loss L-2 "Loss of physical property"
loss L-3 "Loss of non-physical property"
loss L-4 "Loss of environment"

hazard H-1 "System leaks sensitive information." losses=[L-3]
hazard H-2 "System uses intended modified data without detected." losses=[L-1, L-2, L-3, L-4]
hazard H-3 "System fails to accomplish missions." losses=[L-3]
hazard H-4 "System works with unauthenticated devices." losses=[L-1, L-2, L-3, L-4]

ifb IFB-1 class=data_check instructor=NPCH:not_called hazards=[H-2, H-4]
    text="Data check is bypassed and outputs a fake OK."
ifb IFB-2 class=data_check instructor=PCH:incorrect_data_input hazards=[H-2, H-4]
    text="Unauthenticated or modified data are not detected."
ifb IFB-3 class=data_check instructor=PCH:improper_algorithm hazards=[H-3]
    text="Correct data are input, but outputs a fake NOK."
ifb IFB-4 class=data_check instructor=TI:violate_time_limit hazards=[H-3]
    text="Data check process takes too long and leads to violation of timing."
ifb IFB-5 class=data_transform instructor=PCH:incorrect_data_input hazards=[H-2, H-4]
    text="Unauthenticated or modified data are transformed, decapsulated or encapsulated."
ifb IFB-6 class=data_transform instructor=PCH:improper_algorithm hazards=[H-2, H-3, H-4]
    text="Data are transformed, decapsulated or encapsulated by using malicious algorithms, which may cause insecure behaviors (e.g. modify original information)."
ifb IFB-7 class=data_transform instructor=TI:violate_time_limit hazards=[H-3]
    text="Data transformation, decapsulation or encapsulation takes too long and lead to the violation of timing."
ifb IFB-8 class=data_transmission instructor=NPCH:not_executed_successfully hazards=[H-3]
    text="Data fail to be transmitted to networks."
ifb IFB-9 class=data_transmission instructor=PCH:incorrect_data_input hazards=[H-2, H-4]
    text="Unauthenticated or modified data are transmitted."
ifb IFB-10 class=data_transmission instructor=PCH:improper_algorithm hazards=[H-2]
    text="Data are modified during the transmission."
ifb IFB-11 class=data_transmission instructor=PCH:information_leakage_risk hazards=[H-1]
    text="Data are transmitted with information leakage risks."
ifb IFB-12 class=data_transmission instructor=TI:violate_time_limit hazards=[H-3]
    text="Data transmission takes too long and leads to the violation of timing."
ifb IFB-13 class=service_process instructor=NPCH:not_executed_successfully hazards=[H-3]
    text="Service is requested but not executed correctly."
ifb IFB-14 class=service_process instructor=PCH:incorrect_data_input hazards=[H-2, H-4]
    text="Service is processed with unauthenticated or modified data (e.g. requests from unauthenticated parties)."
ifb IFB-15 class=service_process instructor=PCH:improper_algorithm hazards=[H-3]
    text="Service is processed with incorrect algorithms, which may cause insecure behaviors (e.g. bypassing real processes and reply a faked response)."
ifb IFB-16 class=service_process instructor=PCH:information_leakage_risk hazards=[H-1]
    text="Service is processed with information leakage risks."
ifb IFB-17 class=service_process instructor=TI:violate_time_limit hazards=[H-3]
    text="Service process takes too long and leads to violation of timing."

ls LS-1 parent=IFB-1 category=calling_behavior
    text="Data check is bypassed, and a fake OK result is output."
ls LS-2 parent=IFB-2 category=algorithm
    text="No or inadequate algorithm is used to check the authenticity and integrity of the data."
ls LS-3 parent=IFB-3 category=algorithm
    text="The algorithm is modified, and a fake NOK is output."
ls LS-4 parent=IFB-4 category=algorithm
    text="The algorithm is modified and requires more computing resources."
ls LS-5 parent=IFB-4 category=computing_resource
    text="The adversary occupies computing resources and makes it not enough for the target function."
ls LS-6 parent=IFB-5 category=input
    text="Unauthenticated or modified data are not detected before and input to transform."
ls LS-7 parent=IFB-6 category=algorithm
    text="The algorithm is modified for malicious purposes."
ls LS-8 parent=IFB-7 category=algorithm
    text="The algorithm is modified and requires more computing resources."
ls LS-9 parent=IFB-7 category=computing_resource
    text="The adversary occupies computing resources and makes it not enough for the function."
ls LS-10 parent=IFB-8 category=on_link
    text="Transmission is interrupted intendedly by causing errors on the networks (e.g. broken or shorten links)."
ls LS-11 parent=IFB-9 category=input
    text="Unauthenticated or modified data are not detected before and input to transmit."
ls LS-12 parent=IFB-10 category=on_link
    text="Data is modified when transmitting on links (e.g. man-in-the-middle attack)."
ls LS-13 parent=IFB-11 category=algorithm
    text="No or inadequate anti-leakage algorithm is used for data transmission."
ls LS-14 parent=IFB-11 category=on_link
    text="Links are not protected, the adversary can get access to data on links."
ls LS-15 parent=IFB-12 category=on_link
    text="Transmission is slowed down by additional mechanisms on links (e.g. additional switches)."
ls LS-16 parent=IFB-13 category=algorithm
    text="The algorithm is modified to reject legal requests."
ls LS-17 parent=IFB-13 category=input
    text="Modified system states are input, which makes the system think that the service pre-conditions are not met."
ls LS-18 parent=IFB-13 category=on_link
    text="Service requests are blocked on links."
ls LS-19 parent=IFB-14 category=input
    text="Unauthenticated or modified data are not detected and input as requested service data."
ls LS-20 parent=IFB-15 category=algorithm
    text="The algorithm is modified for malicious purposes."
ls LS-21 parent=IFB-16 category=algorithm
    text="No or inadequate anti-leakage algorithm is used for data transmission."
ls LS-22 parent=IFB-17 category=algorithm
    text="The algorithm is modified and requires more computing resources."
ls LS-23 parent=IFB-17 category=computing_resource
    text="The adversary occupies computing resources and makes it not enough for the function."
)cat";

/// The built-in guideline catalog, parsed once from kBuiltinCatalogText.
inline const Catalog& builtin_guideline() {
  static const Catalog catalog = [] {
    auto parsed = dsl::parse_catalog(kBuiltinCatalogText, "<builtin>");
    if (!parsed) throw std::logic_error("built-in catalog failed to parse");
    return *parsed.value;
  }();
  return catalog;
}

}  // namespace fisa
