"""
Catalog of mitigation goals, requirements and risks.

Every entry carries the wording it was collected with. Entries that have a
formal rendering carry the formula (written for the two-citizen epidemic
scenario: authority ``a``, citizens ``1`` and ``2``); the rest are informal.
"""

from __future__ import annotations

from typing import Optional

from .formula import Requirement
from .parser import parse_formula, render_spec

# (id, section, text, formula source or None, note)
_ENTRIES: list[tuple[str, str, str, Optional[str], str]] = [
    # epidemiological goals
    ("G-epi-response", "epidemiological goals", "provide an epidemic response", None, ""),
    ("G-epi-control", "epidemiological goals", "bring the pandemic under control",
     "A F G control_pandemic",
     "strengthened to eventually-always: brought and kept under control"),
    ("G-epi-control-weak", "epidemiological goals", "bring the pandemic under control",
     "A F control_pandemic", "eventually-only variant"),
    ("G-slow-spread", "epidemiological goals", "slow the spread of the virus",
     "A G (forall n in 1..2 . num_infected = n -> A F num_infected < n)",
     "reproduction number substituted by the per-state num_infected feature; range fits 2 citizens"),
    ("G-deaths", "epidemiological goals", "prevent deaths",
     "A G num_infected <= 1",
     "no death state is modelled; bounded by simultaneous infections with k = 1"),
    ("G-reproduction", "epidemiological goals", "reduce the reproduction rate of the virus", None,
     "needs a reproduction number, which the models do not define"),
    ("G-trace", "epidemiological goals", "trace the spread of the virus and identify Covid-19 clusters", None, ""),
    ("G-find-infections", "epidemiological goals", "find potential new infections", None, ""),
    ("G-register-contacts", "epidemiological goals", "register contacts between potential carriers", None, ""),
    ("G-deter", "epidemiological goals", "deter people from breaking quarantine", None, ""),
    ("R-public-health", "epidemiological goals", "The efforts must meet public health needs best", None, ""),
    ("R-complement", "epidemiological goals",
     "Digital measures should complement traditional forms of mitigation", None, ""),
    ("R-help-authorities", "epidemiological goals",
     "They should be designed to help the health authorities", None, ""),
    # effectiveness
    ("R-effective", "effectiveness", "The strategy should be effective", None, ""),
    ("R-effectiveness", "effectiveness", "It should make a difference",
     "(exposed_1 -> !A F K[1] ONCE exposed_1) & supp(a: notify_known) (exposed_1 -> A F K[1] ONCE exposed_1)",
     "the alert property fails without the strategy and holds once the authority plays notify_known"),
    ("K-inaccurate", "effectiveness", "Inaccurate detection of carriers and infected people", None, ""),
    ("K-lockdown-easing", "effectiveness", "Specifically, this may adversely impact easing of lockdowns", None, ""),
    ("K-assurance", "effectiveness", "Misguided assurance that going out is safe", None, ""),
    # information flow
    ("R-info-identify", "information flow", "identify people who might have been exposed to the virus",
     "exposed_1 -> A F K[a] ONCE exposed_1", ""),
    ("R-info-alert", "information flow", "alert those people",
     "exposed_1 -> <<a>> F <<1>> F K[1] ONCE exposed_1", ""),
    ("R-info-alert-strategic", "information flow", "alert those people",
     "A G (K[a] ONCE exposed_1 -> <<a>> F <<1>> F K[1] ONCE exposed_1)",
     "if the authority knows of the exposure it can make citizen 1 know it"),
    ("R-info-rapid", "information flow", "The identification and notification must be rapid",
     "exposed_1 -> A F<=2 K[a] ONCE exposed_1", "rapid read as within 2 steps"),
    ("R-info-notify-prob", "information flow", "The identification and notification must be rapid",
     "A G (K[a] ONCE exposed_1 -> <<a>>[P>=0.99] F<=10 <<1>>[compl<=5] F K[1] ONCE exposed_1)",
     "notification within 10 steps with probability at least 0.99; citizen strategy of complexity at most 5"),
    # monitoring
    ("R-monitor-outbreak", "monitoring", "monitoring the state of the pandemic",
     "<<a>> G (K[a] outbreak | K[a] !outbreak)", ""),
    ("R-monitor-behavior", "monitoring", "monitoring the behavior of people", None, ""),
    ("R-monitor-effectiveness", "monitoring", "to monitor the effectiveness of the strategy", None, ""),
    ("M-diag-outbreak", "monitoring", "monitoring the state of the pandemic",
     "DIAG(a, !outbreak)", "diagnosability of the no-outbreak property"),
    ("M-resil-control", "monitoring", "bring the pandemic under control",
     "RESIL(a, control_pandemic)", "resilience of pandemic control"),
    # tradeoffs
    ("R-balance", "tradeoffs", "strike the right balance", None, ""),
    # economic and social impact
    ("R-econ-cost", "economic stability",
     "minimize the cost to local economies and the negative impact on economic growth", None, ""),
    ("R-econ-normal", "economic stability", "allow for return to normal economy and society", None, ""),
    ("R-soc-lockdown", "social and political impact", "ease lockdowns and home confinement", None, ""),
    ("R-soc-wellbeing", "social and political impact",
     "minimize adverse impact on social relationships and personal well-being", None, ""),
    ("R-soc-discrimination", "social and political impact",
     "prohibit economic and social discrimination", None, ""),
    ("R-soc-communities", "social and political impact", "protect the communities", None, ""),
    ("R-soc-compulsory", "social and political impact",
     "Surveillance technologies should not become compulsory for public and social engagements", None, ""),
    ("K-soc-knowledge", "social and political impact", "Little knowledge about social impact of the measures", None, ""),
    ("K-soc-divides", "social and political impact", "Discrimination and creation of social divides", None, ""),
    ("K-soc-disinformation", "social and political impact", "Disinformation and information abuse", None, ""),
    ("K-soc-false-security", "social and political impact", "Providing a false sense of security", None, ""),
    ("K-soc-manipulation", "social and political impact",
     "Political manipulation, creating social unrest, and dishonest competition", None, ""),
    ("K-soc-it-influence", "social and political impact",
     "Too much political influence of IT companies on the decisions of sovereign democratic countries", None, ""),
    # costs
    ("R-cost-financial", "costs and logistics", "The financial cost of the measures should be minimized", None,
     "economic cost is not modelled"),
    ("R-cost-human", "costs and logistics", "Minimization of the involved human resources", None, ""),
    ("R-cost-timeliness", "costs and logistics", "Timeliness", None, ""),
    ("R-cost-coordination", "costs and logistics",
     "Coordination between different institutions and authorities", None, ""),
    # ethical and legal
    ("R-eth-justifiable", "ethical and legal", "The mitigation strategy must be ethically justifiable", None, ""),
    ("R-eth-proportionate", "ethical and legal",
     "The measures should be necessary, proportionate, legitimate, just, scientifically valid, and time-bound",
     None, ""),
    ("R-eth-invasive", "ethical and legal",
     "They should not be invasive and must not be done at the expense of individual civil rights", None, ""),
    ("R-eth-available", "ethical and legal", "Means of protection should be available to anyone", None, ""),
    ("R-eth-voluntary", "ethical and legal", "They should be voluntary", None, ""),
    ("R-eth-legal", "ethical and legal", "The measures must comply with legal regulations", None, ""),
    ("R-eth-implementation", "ethical and legal", "Implementation and impact must also be considered", None, ""),
    ("R-eth-assessment", "ethical and legal", "Impact assessment should be conducted and made public", None, ""),
    ("K-eth-harms", "ethical and legal", "Serious and long-lasting harms to fundamental rights and freedoms", None, ""),
    ("K-eth-resources", "ethical and legal", "Costs of not devoting resources to something else", None, ""),
    ("K-eth-scrutiny", "ethical and legal", "Measures designed and implemented without adequate scrutiny", None, ""),
    ("K-eth-surveillance", "ethical and legal", "Measures that support extensive physical surveillance", None, ""),
    ("K-eth-mandatory", "ethical and legal",
     "Mandatory use of digital measures, collecting sensitive information, sharing the data with the government",
     None, ""),
    ("K-eth-censorship", "ethical and legal", "Censorship practices", None, ""),
    # privacy
    ("R-priv-design", "general privacy",
     "The strategy should be designed with privacy and information security in mind", None, ""),
    ("R-priv-mitigate", "general privacy",
     "It should mitigate privacy concerns inherent in a technological approach", None, ""),
    ("R-anonymity", "general privacy",
     "It should be anonymous under data protection laws, i.e., it cannot lead to the identification of an individual",
     "A G (!K[2] tested_positive_1 & !K[2] !tested_positive_1)",
     "instantiated for citizen 1 against peer 2; the database entry is the positive test"),
    ("R-priv-protected", "general privacy", "The information about users should be protected at all times", None, ""),
    ("R-priv-backend", "general privacy",
     "The design should include recommendations for how back-end systems should be secured", None, ""),
    ("K-priv-policies", "general privacy", "Lack of clear privacy policies", None, ""),
    ("K-priv-exploitation", "general privacy",
     "Exploitation of personal information by authorities or third parties", None, ""),
    ("K-priv-linking", "general privacy", "Linking different datasets at some point in the future", None, ""),
    ("K-priv-alerts", "general privacy", "Alerts can be too revealing", None, ""),
    ("K-priv-association", "general privacy", "It may be possible to work out who is associating with whom", None, ""),
    # data protection
    ("R-data-types", "data protection", "Clear and reasonable limits on the data collection types", None, ""),
    ("R-data-use", "data protection", "Limitations on how the data is used", None, ""),
    ("R-data-disease-control", "data protection",
     "the data is to be used strictly for disease control and not shared with law enforcement agencies", None, ""),
    ("R-data-state-access", "data protection", "Less state access and control over user data", None, ""),
    ("R-data-minimized", "data protection",
     "Data collection should be minimized and based on informed consent of the participants", None, ""),
    ("R-access", "data protection", "Giving access to one's data should be voluntary",
     "(<<1>> F access(a,1) & <<1>> G !access(a,1)) & (<<1>> F access(2,1) & <<1>> G !access(2,1))",
     "instantiated for citizen 1 and the other parties a and 2"),
    ("R-data-delete", "data protection", "One should be able to delete their personal information", None, ""),
    ("R-data-own-access", "data protection", "One should have the right to access their own data", None, ""),
    ("R-data-remove", "data protection",
     "the user should be able to remove the software and disable more invasive features", None, ""),
    ("K-data-hacked", "data protection", "Data storage that can be hacked and exploited", None, ""),
    ("K-data-breaches", "data protection", "Data breaches due to insider threats", None, ""),
    ("K-data-creep", "data protection", "Function creep and state surveillance", None, ""),
    ("K-data-sharing", "data protection", "Sharing data across agencies or selling to a third party", None, ""),
    ("K-data-commercial", "data protection", "Integration with commercial services", None, ""),
    # sunsetting
    ("R-sun-terminate", "sunsetting and safeguards", "Measures should be terminated as soon as possible", None, ""),
    ("R-sun-destroy", "sunsetting and safeguards", "Data should be eventually or even periodically destroyed", None, ""),
    ("R-sun-transparency", "sunsetting and safeguards", "Transparency of data collection", None, ""),
    ("R-sun-abuse", "sunsetting and safeguards", "There should be clear policies to prevent abuse", None, ""),
    ("R-sun-accountability", "sunsetting and safeguards",
     "Privacy must be backed up with clear lines of accountability and processes for evaluation and monitoring",
     None, ""),
    ("R-sun-judicial", "sunsetting and safeguards", "Judicial oversight must be provided", None, ""),
    ("R-sun-independent", "sunsetting and safeguards", "Safeguards should be backed by an independent figure", None, ""),
    ("K-sun-continue", "sunsetting and safeguards", "Surveillance might continue to be used after the pandemic", None, ""),
    ("K-sun-government", "sunsetting and safeguards",
     "Data can stay with the government longer than necessary", None, ""),
    # impact of privacy
    ("R-impact-information", "impact of privacy",
     "People must get the information they need to protect themselves and others", None, ""),
    ("R-impact-discrimination", "impact of privacy",
     "There must be protections against economic and social discrimination based on information and technology",
     None, ""),
    ("R-impact-danger", "impact of privacy",
     "Information should be used in such a way that people who fear being judged will not put other people in danger",
     None, ""),
    ("K-impact-stigma", "impact of privacy", "Fear of social stigma", None, ""),
    ("K-impact-judgement", "impact of privacy", "Online judgement and ridicule", None, ""),
    # reasonable privacy
    ("R-reasonable-privacy", "reasonable privacy",
     "exploiting the risks would require significant effort by the attackers for minimal reward", None, ""),
    # user incentives and adoption
    ("G-user-acceptance", "user incentives", "High acceptance rate for the mitigation measures", None, ""),
    ("G-user-incentives", "user incentives",
     "Creating incentives and overcoming incentive problems for individual people to adopt the strategy", None, ""),
    ("K-user-benefits", "user incentives", "Lack of immediate benefits for the participants", None, ""),
    ("K-user-risks", "user incentives", "Perceived privacy and security risks", None, ""),
    ("K-user-attention", "user incentives",
     "Some measures can divert attention from more important measures, and make people less alert", None, ""),
    ("K-user-false-security", "user incentives", "Creating false sense of security from the pandemic", None, ""),
    ("R-adoption", "adoption", "Enough people should download and use the app to make it effective", None,
     "graded rather than binary; compare adoption patterns with the scenario generator"),
    ("K-adoption-trust", "adoption", "Lack of users' trust", None, ""),
    ("K-adoption-empathy", "adoption", "Lack of social knowledge and empathy by the authorities", None, ""),
    # technology
    ("R-tech-operational", "technology", "The concrete measures and tools must be operational", None, ""),
    ("R-tech-compatible", "technology",
     "they should be compatible with their environment of implementation", None, ""),
    ("R-tech-transparent", "technology", "Design and implementation should be transparent", None, ""),
    ("R-tech-devices", "technology", "They should be compatible with most available devices", None, ""),
    ("R-tech-battery", "technology", "Reasonable use of battery", None, ""),
    ("R-tech-interface", "technology", "Usable interface", None, ""),
    ("R-tech-proximity", "technology", "Accurate measurements of how close two devices are", None, ""),
    ("R-tech-interoperability", "technology", "Cross-border interoperability", None, ""),
    ("R-tech-verify", "technology", "Possibility to verify the code by the public and experts", None, ""),
    # evaluation
    ("G-eval-learn", "evaluation",
     "use the collected data in order to develop efficient infection control measures", None, ""),
    ("R-eval-exit", "evaluation", "A review and exit strategy should be defined", None, ""),
    ("R-eval-institutional", "evaluation",
     "Before implementing the measures, an institutional assessment is needed", None, ""),
    ("R-eval-society", "evaluation",
     "After the pandemic, there must be the society's assessment whether the strategy has been effective and appropriate",
     None, ""),
    ("R-eval-independent", "evaluation",
     "The assessments should be conducted by an independent body at regular intervals", None, ""),
]


def catalog() -> list[Requirement]:
    """All catalog entries, formalized ones with their parsed formula."""
    entries = []
    for req_id, section, text, source, note in _ENTRIES:
        if source is None:
            entries.append(Requirement(req_id, text, "informal", note=note, section=section))
        else:
            entries.append(Requirement(req_id, text, "formalized", parse_formula(source), note, section))
    return entries


def formalized() -> list[Requirement]:
    return [r for r in catalog() if r.status == "formalized"]


def render_catalog() -> str:
    """The catalog in spec-file format, with status and note comments."""
    return render_spec(catalog())
