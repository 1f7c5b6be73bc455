#!/usr/bin/env python3
"""Regenerate the synthetic desk corpus under desk_corpus/.

The corpus mirrors the shape of a single-device technical library: 7 user
manual documents, 7 service manual documents, and one 90-row error catalog
for the fictional Novamed USX-300 ultrasound scanner, plus the 30-case
instructional query suite (each query resolves to a planted gold phrase),
a self-test script, a maintenance profile, a seeded sample device log with
a ground-truth sidecar, the corpus manifest, and a ready-to-use config.

Run from the repo root:  python scripts/make_desk_corpus.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "desk_corpus"
MODEL = "USX-300"

# --------------------------------------------------------------------------
# manual content: (doc_id, doc_class, title, [(section heading, body), ...])
# --------------------------------------------------------------------------

UM_DOCS = [
    (
        "um-getting-started",
        "Getting Started Guide",
        [
            (
                "Unpacking and placement",
                "Remove the scanner from its transport crate and inspect the housing for "
                "shipping damage before connecting anything. Place the unit on a level "
                "surface with at least ten centimeters of clearance behind the rear vents "
                "so cooling air can circulate freely. The cart wheels must be locked "
                "whenever the system is parked for an exam. Avoid rooms with direct "
                "sunlight on the display and keep the ambient temperature between 10 and "
                "35 degrees Celsius. Humidity above 80 percent can cause condensation on "
                "the internal boards, so allow the system to acclimatize for two hours "
                "after moving it from a cold vehicle.",
            ),
            (
                "Power requirements",
                "Connect the power cable only to a grounded hospital-grade outlet rated "
                "for 100 to 240 volts AC. The scanner draws up to 450 watts during "
                "active scanning. Never use extension cords or multi-socket adapters, "
                "because voltage drops can corrupt images and trip the internal "
                "protection circuit. If the facility power is unstable, an online "
                "uninterruptible power supply of at least 800 VA is recommended. The "
                "equipotential terminal on the rear panel must be bonded to the room "
                "ground bar in installations that require cardiac-floating safety.",
            ),
            (
                "Boot sequence",
                "Press the power button on the control panel and wait for the status "
                "lamp to turn steady green. A normal start takes about ninety seconds "
                "while the system loads its software and runs the built-in checks. Do "
                "not press any keys or connect probes during the countdown screen. If "
                "the lamp blinks amber or the boot stalls on the logo screen for more "
                "than five minutes, note any code shown in the corner and power the "
                "unit off for thirty seconds before trying once more.",
            ),
            (
                "Front panel controls",
                "The control panel groups the trackball, the gain rotary knobs, and the "
                "freeze key within reach of the scanning hand. Each rotary knob has a "
                "press function: pressing the depth knob returns depth to the preset "
                "default. The backlit keys dim automatically in dark rooms; brightness "
                "of the key backlight can be changed in the setup menu under Console "
                "Lighting. Keep liquids away from the panel; the membrane is splash "
                "resistant but not sealed against pooling fluid.",
            ),
        ],
    ),
    (
        "um-imaging-basics",
        "Imaging Basics",
        [
            (
                "Exam presets",
                "Select a preset that matches the exam type before scanning: abdominal, "
                "obstetric, vascular, small parts, or cardiac. Presets load matched "
                "transmit frequency, depth, focus count, and dynamic range, and they "
                "are the fastest way to get a diagnostic image. Custom presets can be "
                "saved from the current control state through the Save Preset dialog "
                "and appear in the preset list with a user badge.",
            ),
            (
                "Adjusting image gain",
                "Turn the master gain knob to balance overall image brightness after "
                "setting the correct depth. Use the time gain compensation sliders to "
                "even out brightness across depth zones; the sliders should form a "
                "gentle curve, not a zigzag. If the image stays dark at maximum gain, "
                "check that the correct probe is selected and that the acoustic output "
                "is not limited by the obstetric safety preset. Excessive gain "
                "introduces speckle noise that hides low-contrast lesions.",
            ),
            (
                "Depth and focus",
                "Set the imaging depth so the region of interest occupies the lower two "
                "thirds of the screen, then place the focus marker at or slightly below "
                "that region. Each additional focal zone improves lateral resolution "
                "but lowers the frame rate, which matters for moving structures. The "
                "depth readout in centimeters appears on the right edge of the image "
                "next to the scale markers.",
            ),
            (
                "Freeze and cine review",
                "Press the freeze key to stop live imaging; the system keeps the last "
                "four hundred frames in the cine buffer. Roll the trackball to scroll "
                "through the buffer and pick the best frame before measuring or saving. "
                "The cine buffer is cleared when the probe or preset changes, so freeze "
                "promptly after the sweep you want to review.",
            ),
        ],
    ),
    (
        "um-transducer-care",
        "Transducer Handling and Care",
        [
            (
                "Cleaning the transducer",
                "Clean the transducer after every examination. Disconnect or freeze the "
                "probe, remove visible gel with a soft dry wipe, then wipe the lens and "
                "housing with a low-level disinfectant wipe approved in the compatibility "
                "list. Never soak the probe connector or let fluid run into the strain "
                "relief. Abrasive pads and alcohol above 70 percent will cloud the "
                "acoustic lens over time. Let the probe air-dry completely on the "
                "holder before the next exam.",
            ),
            (
                "Disinfection levels",
                "Surface probes used on intact skin need low-level disinfection, while "
                "endocavity probes require high-level disinfection after each use. "
                "Follow the contact time printed on the disinfectant label exactly; "
                "shorter soaks do not disinfect and longer soaks attack the lens "
                "adhesive. Record each high-level disinfection cycle in the reprocessing "
                "logbook with date, operator, and solution lot number.",
            ),
            (
                "Probe storage",
                "Store probes hanging in the cart holders or in the wall rack with the "
                "cable supported by its hook, never coiled tighter than a fifteen "
                "centimeter loop. The lens must not rest against hard surfaces. For "
                "transport between departments use the padded case and separate each "
                "probe into its own compartment so connectors cannot knock together.",
            ),
            (
                "Coupling gel usage",
                "Use only water-based coupling gel from sealed bottles. Gel may be "
                "warmed in an approved gel warmer; the maximum warmer temperature is "
                "forty degrees Celsius. Refillable "
                "bottles must be emptied, washed, and dried weekly to prevent bacterial "
                "growth; never top up a partially used bottle. Oil-based lotions damage "
                "the lens material and void the probe warranty.",
            ),
        ],
    ),
    (
        "um-patient-data",
        "Patient Data and Studies",
        [
            (
                "Entering patient information",
                "Start every study from the patient entry screen: enter the patient "
                "identifier, name, and date of birth, or pull the booking from the "
                "worklist when the network is available. Scanning under the previous "
                "patient record is the most common cause of mislabeled studies, so the "
                "system warns when a study has been open for more than four hours.",
            ),
            (
                "Saving studies",
                "Press the store key to save the current frame or loop to the study. "
                "Images are written to the internal disk immediately; the disk gauge in "
                "the status bar shows remaining capacity. When the gauge turns red the "
                "oldest archived studies are at risk: export or delete them before the "
                "disk fills, because a full disk blocks new image storage mid-exam.",
            ),
            (
                "Exporting to USB",
                "Insert a USB storage device into the port on the rear panel and choose "
                "Export from the archive menu. Select studies, pick an export format, "
                "and confirm. Do not remove the USB device while the transfer lamp "
                "blinks; interrupted exports leave unreadable partial files. The "
                "system formats reports as PDF and images as standard image files "
                "viewable on any computer.",
            ),
            (
                "Deleting studies",
                "Only users with the archive role can delete studies. Deletion is "
                "permanent: the system asks for a second confirmation and records the "
                "action in the audit list with the operator identifier. Verify the "
                "export completed and open one exported file to confirm readability "
                "before deleting the original study from the scanner.",
            ),
        ],
    ),
    (
        "um-display-settings",
        "Display and Annotation Settings",
        [
            (
                "Brightness and contrast",
                "Adjust display brightness and contrast from the setup menu, not the "
                "monitor bezel buttons, so the values are stored with the system "
                "profile. The grayscale bar on the right edge of the screen should show "
                "distinct steps from black to white; if the darkest two steps merge, "
                "lower the room lighting or raise the brightness one step at a time.",
            ),
            (
                "Monitor calibration",
                "Run the monitor calibration pattern monthly from Setup, then Display, "
                "then Calibration Pattern. View the pattern from the normal operator "
                "position and confirm the gray wedge, the line pairs, and the contrast "
                "patches match the acceptance notes posted on the cart. A washed-out "
                "pattern usually means the backlight has aged; report it rather than "
                "compensating with exam gain.",
            ),
            (
                "Screen annotations",
                "Use the annotation key to type labels on the image. The label library "
                "carries the standard anatomy terms per preset, and the arrow marker "
                "snaps to the trackball position. Annotations burn into stored images, "
                "so place them away from the region of interest. Clear All removes "
                "annotations without touching measurements.",
            ),
            (
                "Body markers",
                "Body markers show the probe position on a small anatomy pictogram. "
                "Select the pictogram matching the exam region and rotate the probe "
                "icon to the actual orientation. Consistent marker use makes follow-up "
                "comparisons much faster for the reading physician.",
            ),
        ],
    ),
    (
        "um-measurements",
        "Measurements and Reports",
        [
            (
                "Distance measurement",
                "Press the caliper key and place the first cursor with the trackball, "
                "then press set and drag the second cursor across the structure. The "
                "distance readout appears in the results box in millimeters. Measure on "
                "a frozen frame at the largest clear view of the structure; measuring "
                "on a moving image produces unstable values.",
            ),
            (
                "Area and circumference",
                "Choose the ellipse method for regular shapes: anchor the first axis, "
                "then widen the ellipse to fit the border. For irregular outlines use "
                "the trace method and follow the border smoothly; lifting the trackball "
                "finger closes the trace automatically. Area in square centimeters and "
                "circumference in millimeters appear together in the results box.",
            ),
            (
                "Obstetric calculations",
                "Standard fetal measurements feed the growth tables selected in the "
                "obstetric setup: biparietal diameter, head circumference, abdominal "
                "circumference, and femur length. The report page shows estimated "
                "fetal weight with the chosen formula and plots each value against "
                "gestational age percentile curves.",
            ),
            (
                "Report pages",
                "The report editor collects all measurements of the study grouped by "
                "anatomy. Edit fields before closing the study; once the study is "
                "closed the report is locked and can only be amended as an addendum. "
                "Reports export together with images during USB or network transfer.",
            ),
        ],
    ),
    (
        "um-routine-upkeep",
        "Routine Operator Upkeep",
        [
            (
                "Daily wipe-down",
                "At the end of each scanning day wipe the control panel, the probe "
                "holders, and the cart handles with an approved surface disinfectant. "
                "Check the probe lens for cracks and the cables for cuts while wiping. "
                "Empty the gel warmer and leave its lid open overnight to dry.",
            ),
            (
                "Weekly checks",
                "Once a week confirm the trackball rolls smoothly, the brakes hold on a "
                "slope, and all four probe holders are intact. Lift the trackball ring "
                "and clean the ball and rollers with a lint-free cloth; grit in the "
                "rollers is the usual cause of cursor jumping during measurements.",
            ),
            (
                "Air filter cleaning",
                "The intake air filter behind the lower front grille must be cleaned "
                "every month in dusty sites and every quarter otherwise. Slide the "
                "filter out of its rail, rinse it under lukewarm water, and reinstall "
                "it only when fully dry. A clogged filter raises the internal "
                "temperature and triggers thermal warnings during long exams.",
            ),
            (
                "Consumables",
                "Keep stock of coupling gel, printer paper, disinfectant wipes, and "
                "spare trackball rings. Use only the thermal paper grade listed in the "
                "accessories sheet; other grades leave residue on the print head and "
                "fade within months in the archive.",
            ),
        ],
    ),
]

SM_DOCS = [
    (
        "sm-power-system",
        "Power System Service",
        [
            (
                "Power supply module",
                "The main power supply module converts line input to the 48 volt "
                "distribution rail and the 12 and 5 volt logic rails. Before any work "
                "on the module, disconnect mains and wait five minutes for the bulk "
                "capacitors to discharge below safe voltage. The module is replaced as "
                "one unit; board-level repair of the supply is not supported in the "
                "field. Torque the mounting screws to 1.2 newton meters and route the "
                "harness away from the fan intake.",
            ),
            (
                "Fuse replacement",
                "The line fuses sit in the drawer beside the power inlet. Replace them "
                "only with the rating printed on the panel label: T6.3A 250V time-delay "
                "cartridges. A fuse that blows again immediately indicates a short in "
                "the supply or the motherboard, not a bad fuse; continuing to replace "
                "fuses without finding the fault risks harness damage. Log every fuse "
                "change with the line voltage measured at the outlet.",
            ),
            (
                "Battery backup",
                "The backup battery keeps the clock and the pending study cache alive "
                "during mains loss. A battery older than three years no longer holds "
                "the cache through a weekend; replace it during preventive maintenance. "
                "After replacement, set the system clock and verify the cache test in "
                "the service menu reports hold time above eight hours.",
            ),
            (
                "Voltage rail test points",
                "Test points TP1 through TP5 on the distribution board expose the 48, "
                "12, 5, 3.3, and negative 12 volt rails. With the system idle, each "
                "rail must read within five percent of nominal. A sagging 48 volt rail "
                "under scanning load points to the supply module; a sagging logic rail "
                "with a healthy 48 volt rail points to the point-of-load converters on "
                "the motherboard.",
            ),
        ],
    ),
    (
        "sm-probes-connectors",
        "Probe and Connector Service",
        [
            (
                "Probe connector pins",
                "Inspect the probe connector pins with a magnifier whenever a probe "
                "drops out intermittently. Bent pins in the scanner receptacle can be "
                "straightened once with the pin tool; a receptacle with broken or "
                "corroded pins must be replaced as an assembly. Clean oxidized pins "
                "with electronic contact cleaner, never with abrasives, and check the "
                "locking lever seats fully with a firm click.",
            ),
            (
                "Strain relief",
                "A cracked strain relief lets the cable flex at a sharp angle and "
                "breaks conductors over weeks. Replace the strain relief boot when the "
                "rubber shows cuts or no longer grips the cable. During replacement "
                "inspect the outer jacket underneath for kinks; a kinked jacket with "
                "image dropouts means the cable core is already damaged and the probe "
                "should go for repair.",
            ),
            (
                "Cable continuity test",
                "Run the probe cable continuity test from the service menu with the "
                "probe connected and the test fixture cap on the lens. The test drives "
                "each channel and reports open or shorted elements by channel number. "
                "Up to two isolated open elements are acceptable on general imaging "
                "probes; clustered failures or shorts fail the probe.",
            ),
            (
                "Connector board replacement",
                "The connector board carries both probe receptacles and the relay "
                "matrix. Replacement requires removing the side cover, the shield "
                "plate, and two flex cables; mark the flex cable orientation before "
                "unplugging. After fitting the new board run the full probe recognition "
                "test with every probe in the department.",
            ),
        ],
    ),
    (
        "sm-boot-diagnostics",
        "Boot and Self-Test Diagnostics",
        [
            (
                "Startup self test",
                "At every power-on the system runs the startup self test covering the "
                "power rails, the memory banks, the graphics engine, and the beamformer "
                "boards. The test takes about forty seconds and its progress shows as "
                "a segment counter in the lower left of the boot screen. The same "
                "sequence can be run on demand from the service menu as the extended "
                "self test, which adds the probe relay matrix and the thermal sensors.",
            ),
            (
                "Boot failure codes",
                "When the self test stops the boot, the screen shows a boot failure "
                "code in the corner. Codes beginning with E point to system and power "
                "faults, codes beginning with P to probe path faults, and codes "
                "beginning with I to imaging chain faults. Write the code down exactly "
                "as displayed, including any suffix letter, before power cycling; the "
                "code also lands in the persistent event log.",
            ),
            (
                "Safe mode",
                "Holding the freeze key during power-on starts the system in safe mode "
                "with the beamformer disabled. Safe mode is for retrieving studies and "
                "exporting the event log from a unit that cannot finish a normal boot. "
                "Scanning is blocked in safe mode and the title bar shows an amber "
                "banner until the next full restart.",
            ),
            (
                "Firmware recovery",
                "If an interrupted update leaves the system rebooting in a loop, use "
                "the recovery USB prepared with the service image for this exact "
                "software version. Insert the USB, power on holding the store key, and "
                "wait for the recovery menu. Never power off during the flash stage; "
                "a second interruption can brick the motherboard controller.",
            ),
        ],
    ),
    (
        "sm-image-artifacts",
        "Image Artifact Troubleshooting",
        [
            (
                "Noise bands",
                "Horizontal noise bands that move with gain changes usually come from "
                "electrical interference rather than the probe. Check that the scanner "
                "does not share its outlet with infusion pumps or electrosurgical "
                "carts, and that the room ground bond is intact. Bands present on all "
                "probes in the phantom image with the lights off point to a failing "
                "channel board in the beamformer.",
            ),
            (
                "Dropout lines",
                "Vertical dark lines that stay fixed on the image while the probe "
                "moves indicate dead elements or a broken channel path. Run the cable "
                "continuity test to separate probe faults from board faults: dropouts "
                "that follow the probe to another receptacle are in the probe; "
                "dropouts that stay with the receptacle are in the relay matrix or "
                "beamformer channel.",
            ),
            (
                "Ghosting and reverberation",
                "Repeating echoes below a strong reflector are reverberation artifacts "
                "and are physics, not faults; change the insonation angle to confirm. "
                "True ghosting across the whole image after a board swap usually means "
                "the shield plate was left off or a flex cable is seated one row off.",
            ),
            (
                "Shading correction",
                "Uneven brightness from left to right on a uniform phantom is shading. "
                "Run the shading correction routine in the service menu with the "
                "reference phantom at room temperature. If shading returns within days, "
                "suspect a drifting channel board rather than repeating the correction.",
            ),
        ],
    ),
    (
        "sm-cooling-system",
        "Cooling System Service",
        [
            (
                "Fan assembly",
                "The rear fan assembly pulls air through the lower intake filter across "
                "the card cage. Replace a fan whose bearing whines or whose measured "
                "speed in the service menu drops below 80 percent of nominal. After "
                "replacement confirm airflow direction: the label arrow must point into "
                "the chassis or the card cage will overheat within the hour.",
            ),
            (
                "Thermal sensor",
                "The card cage thermal sensor feeds the overtemperature protection. A "
                "sensor reading stuck at one value across a cold boot and a warm "
                "afternoon is failed and must be replaced; do not bridge or disable it. "
                "Sensor readings appear in the service menu next to each rail voltage.",
            ),
            (
                "Heat sink cleaning",
                "During annual preventive maintenance vacuum the card cage heat sinks "
                "and straighten bent fins with the fin comb. Dust blankets on the "
                "beamformer heat sinks raise channel temperature enough to add noise "
                "that looks like a failing board.",
            ),
            (
                "Overtemperature shutdown",
                "At the first threshold the system shows a thermal warning banner and "
                "raises fan speed; at the second it closes the study, parks the disk, "
                "and shuts down within one minute. After any thermal shutdown find the "
                "airflow fault before returning the unit to clinical use; repeated "
                "shutdowns halve the life of the supply capacitors.",
            ),
        ],
    ),
    (
        "sm-calibration",
        "Calibration Procedures",
        [
            (
                "Gain calibration procedure",
                "Run the gain calibration with the reference phantom after changing the "
                "beamformer, the connector board, or the supply module. Warm the "
                "system for twenty minutes, couple the calibration probe to the "
                "phantom with fresh gel, and start the routine from the service menu. "
                "The routine sweeps transmit levels and writes a correction table; it "
                "fails if the phantom temperature is outside 18 to 26 degrees Celsius "
                "or the probe has dead elements.",
            ),
            (
                "Phantom image test",
                "Monthly image quality assurance uses the grayscale phantom: verify "
                "penetration depth, the number of visible cyst targets, and the axial "
                "and lateral resolution pin pairs against the baseline sheet from "
                "installation. Record results on the QA card; a loss of one cyst "
                "target or one centimeter of penetration triggers a service call.",
            ),
            (
                "Acoustic output check",
                "The acoustic output check requires the hydrophone fixture and is a "
                "bench procedure, not a field one. In the field, verify the displayed "
                "mechanical and thermal indices match the preset sheet values for each "
                "preset after a software update; a mismatch blocks clinical use until "
                "the output tables are reloaded.",
            ),
            (
                "Geometry calibration",
                "The geometry calibration maps caliper distance against the phantom "
                "pin grid. Measure the vertical and horizontal two centimeter pin "
                "pairs; each must read within plus or minus one millimeter. Out of "
                "tolerance readings invalidate every clinical measurement, so the "
                "unit must be withdrawn until recalibrated.",
            ),
        ],
    ),
    (
        "sm-parts-replacement",
        "Board and Part Replacement",
        [
            (
                "Board swap procedure",
                "Power down, disconnect mains, and wait five minutes before opening the "
                "card cage. Release the retaining bar, pull the board by both ejector "
                "levers, and slide the replacement in until the levers cam home. Run "
                "the extended self test and the gain calibration after any beamformer "
                "board swap; the correction tables are board-specific.",
            ),
            (
                "ESD precautions",
                "Wear the grounded wrist strap clipped to the chassis stud for all "
                "board handling, and carry boards only in their shielding bags. Most "
                "winter-season channel board failures trace back to handling without "
                "a strap; the damage shows up weeks later as drifting gain on single "
                "channels.",
            ),
            (
                "Fastener torques",
                "Card cage screws take 0.8 newton meters, shield plates 0.6, and the "
                "supply module bracket 1.2. Overtorqued shield screws deform the EMC "
                "gasket and cause interference stripes that imitate a channel fault.",
            ),
            (
                "Part numbers",
                "Order parts with the nine-digit number from the parts catalog, not "
                "the silkscreen marking on the board. Boards with the same silkscreen "
                "exist in three hardware revisions; mixing revisions in one card cage "
                "is rejected by the configuration check at boot.",
            ),
        ],
    ),
]

# --------------------------------------------------------------------------
# 90-code error catalog: (code, description, causes, actions) per subsystem
# --------------------------------------------------------------------------


def build_catalog_rows():
    rows = []

    def add(code, desc, causes, actions):
        rows.append(f"{code} | {desc} | {'; '.join(causes)} | {'; '.join(actions)}")

    system_faults = [
        ("mains undervoltage detected during scanning", ["facility supply sag", "damaged power cable"],
         ["measure outlet voltage", "connect to dedicated circuit"]),
        ("supply rail out of tolerance at power on", ["aging supply module", "shorted load board"],
         ["read rail test points TP1-TP5", "replace supply module"]),
        ("bulk capacitor charge timeout", ["inrush limiter open", "supply module fault"],
         ["check inrush resistor", "replace supply module"]),
        ("backup battery below holding charge", ["battery older than three years"],
         ["replace backup battery", "set system clock"]),
        ("system clock reset detected", ["backup battery empty"],
         ["replace backup battery", "verify study timestamps"]),
        ("internal temperature above warning threshold", ["clogged intake filter", "fan degraded"],
         ["clean air filter", "check fan speed in service menu"]),
        ("thermal shutdown executed", ["blocked rear vents", "failed fan assembly"],
         ["restore clearance behind vents", "replace fan assembly"]),
        ("card cage fan speed below limit", ["worn fan bearing"],
         ["replace fan assembly"]),
        ("thermal sensor implausible reading", ["sensor failure", "harness damage"],
         ["replace thermal sensor", "inspect sensor harness"]),
        ("configuration check failed at boot", ["mixed board revisions"],
         ["verify board revisions against parts catalog"]),
        ("persistent event log nearly full", ["log never exported"],
         ["export event log", "clear acknowledged events"]),
        ("internal disk capacity critical", ["archive never exported"],
         ["export old studies", "delete confirmed studies"]),
        ("disk write verification failed", ["failing internal disk"],
         ["back up studies immediately", "replace internal disk"]),
        ("software watchdog restart", ["application hang"],
         ["export event log", "report with code if recurring"]),
        ("firmware image checksum mismatch", ["interrupted update"],
         ["run firmware recovery from service USB"]),
        ("license file invalid or expired", ["clock rollback", "corrupted license"],
         ["verify system date", "reinstall license file"]),
        ("touch panel controller unresponsive", ["controller lockup", "flex cable loose"],
         ["restart system", "reseat panel flex cable"]),
        ("trackball input erratic", ["dirt on rollers"],
         ["clean trackball ball and rollers"]),
        ("key matrix stuck key detected", ["fluid ingress in panel"],
         ["dry panel", "replace key membrane"]),
        ("speaker self check failed", ["speaker open circuit"],
         ["replace speaker assembly"]),
        ("network interface initialization failed", ["switch port down", "cable fault"],
         ["check network cable", "verify switch port"]),
        ("worklist server unreachable", ["network outage", "wrong server address"],
         ["verify network settings", "ping worklist server"]),
        ("archive transfer incomplete", ["connection dropped mid transfer"],
         ["retry export", "check network stability"]),
        ("usb export device removed early", ["device pulled during write"],
         ["repeat export", "wait for transfer lamp"]),
        ("printer not responding", ["paper jam", "printer offline"],
         ["clear paper path", "power cycle printer"]),
        ("print head temperature fault", ["wrong paper grade"],
         ["use listed thermal paper", "clean print head"]),
        ("equipotential ground check failed", ["ground bond loose"],
         ["tighten equipotential terminal", "verify room ground bar"]),
        ("mains frequency out of range", ["generator supply unstable"],
         ["run from UPS", "measure line frequency"]),
        ("ups communication lost", ["signal cable unplugged"],
         ["reconnect UPS signal cable"]),
        ("power button held during boot", ["stuck power key"],
         ["inspect power key", "release key and reboot"]),
    ]
    probe_faults = [
        ("probe recognition failed on port A", ["oxidized connector pins", "probe EPROM fault"],
         ["clean connector pins", "test probe on port B"]),
        ("probe recognition failed on port B", ["bent receptacle pins"],
         ["straighten pins with pin tool", "replace receptacle assembly"]),
        ("probe EPROM read error", ["EPROM corrupted"],
         ["send probe for repair"]),
        ("probe locking lever not seated", ["lever worn", "incomplete insertion"],
         ["reseat probe with firm click", "replace locking lever"]),
        ("probe element open circuit cluster", ["cable core damage"],
         ["run cable continuity test", "send probe for repair"]),
        ("probe element short circuit", ["lens delamination", "fluid ingress"],
         ["remove probe from service", "send probe for repair"]),
        ("probe temperature above safety limit", ["endocavity probe overdriven"],
         ["stop exam", "let probe cool", "check preset acoustic output"]),
        ("probe temperature sensor missing", ["sensor line broken in cable"],
         ["run cable continuity test", "send probe for repair"]),
        ("relay matrix switching fault", ["relay stuck on connector board"],
         ["run extended self test", "replace connector board"]),
        ("probe id conflict between ports", ["two probes with same id"],
         ["update probe EPROM", "report configuration"]),
        ("transmit voltage fault on probe channel", ["beamformer channel short"],
         ["replace channel board"]),
        ("receive chain gain drift on single channel", ["ESD damaged channel"],
         ["replace channel board", "review strap usage"]),
        ("strain relief wear detected by inspection", ["cable flex at sharp angle"],
         ["replace strain relief boot", "inspect cable jacket"]),
        ("probe lens damage reported", ["impact on hard surface"],
         ["remove probe from service", "document damage"]),
        ("coupling fault suspected during test", ["dried gel on test cap"],
         ["refit test fixture cap with fresh gel"]),
        ("probe cable shield discontinuity", ["connector shield crack"],
         ["replace connector shell"]),
        ("unsupported probe model connected", ["probe not in compatibility list"],
         ["check compatibility list", "remove probe"]),
        ("probe firmware version mismatch", ["system updated, probe not"],
         ["update probe firmware from service menu"]),
        ("port A receptacle retention weak", ["worn receptacle spring"],
         ["replace receptacle assembly"]),
        ("probe self test aborted by user", ["test interrupted"],
         ["repeat probe self test to completion"]),
        ("acoustic lens temperature gradient abnormal", ["internal absorber failing"],
         ["send probe for acoustic bench check"]),
        ("probe channel crosstalk above limit", ["connector contamination"],
         ["clean both connector faces", "repeat continuity test"]),
        ("biopsy guide detection failed", ["guide sensor dirty"],
         ["clean guide sensor", "reattach biopsy guide"]),
        ("probe button unresponsive", ["button membrane worn"],
         ["send probe for repair"]),
        ("elevation lens focus error", ["manufacturing drift"],
         ["run phantom resolution test", "replace probe if failed"]),
        ("probe usage hours threshold reached", ["preventive schedule"],
         ["schedule probe bench inspection"]),
        ("connector board flex cable fault", ["flex seated one row off"],
         ["reseat flex cables with orientation marks"]),
        ("receptacle pin corrosion detected", ["fluid ingress at connector"],
         ["clean with contact cleaner", "replace receptacle if pitted"]),
        ("probe drop event recorded", ["accelerometer trigger in probe"],
         ["inspect lens and housing", "run full probe test"]),
        ("probe cable length mismatch", ["wrong spare cable fitted"],
         ["fit cable listed for probe model"]),
    ]
    imaging_faults = [
        ("beamformer channel board failed self test", ["channel ASIC fault"],
         ["replace channel board", "run gain calibration"]),
        ("beamformer synchronization lost", ["clock distribution fault"],
         ["reseat clock board", "replace backplane if persistent"]),
        ("transmit power limited by safety monitor", ["output table mismatch"],
         ["reload acoustic output tables"]),
        ("dead element map exceeds limit", ["aging probe elements"],
         ["replace probe", "re-run continuity test"]),
        ("shading correction table invalid", ["correction run aborted"],
         ["repeat shading correction with phantom"]),
        ("gain correction table missing for board", ["board swapped without calibration"],
         ["run gain calibration procedure"]),
        ("image pipeline frame drop rate high", ["graphics engine overheating"],
         ["clean heat sinks", "check fan speed"]),
        ("graphics engine memory test failed", ["VRAM fault"],
         ["replace graphics engine board"]),
        ("video output signal absent", ["display cable loose"],
         ["reseat display cable", "test external monitor"]),
        ("display backlight aging detected", ["backlight hours exceeded"],
         ["replace display backlight", "run monitor calibration"]),
        ("grayscale steps below acceptance", ["backlight aging", "wrong brightness setting"],
         ["run calibration pattern", "adjust from setup menu"]),
        ("cine buffer allocation failed", ["memory bank degraded"],
         ["run memory test", "replace memory bank"]),
        ("memory bank ECC errors increasing", ["module aging"],
         ["replace memory module"]),
        ("preset file corrupted", ["disk sector fault"],
         ["restore presets from backup"]),
        ("measurement package mismatch", ["package version conflict"],
         ["reinstall measurement package"]),
        ("caliper geometry out of tolerance", ["geometry calibration expired"],
         ["run geometry calibration with pin phantom"]),
        ("doppler reference oscillator drift", ["oscillator aging"],
         ["replace front end oscillator", "recalibrate doppler scale"]),
        ("color flow map table checksum error", ["corrupt table load"],
         ["reload color map tables"]),
        ("harmonic imaging filter init failed", ["DSP firmware mismatch"],
         ["update DSP firmware"]),
        ("frame rate below preset minimum", ["too many focal zones", "pipeline degradation"],
         ["reduce focal zones", "run extended self test"]),
        ("image freeze latency high", ["disk cache saturated"],
         ["export studies", "check disk health"]),
        ("annotation layer render fault", ["font cache corrupt"],
         ["clear font cache", "restart system"]),
        ("phantom QA penetration loss", ["probe sensitivity loss", "gain drift"],
         ["run gain calibration", "bench test probe"]),
        ("noise floor elevated on all probes", ["ground bond fault", "channel board noise"],
         ["verify room ground", "swap suspect channel board"]),
        ("interference stripes on image", ["EMC gasket deformed", "nearby electrosurgery"],
         ["check shield screws torque", "separate power circuits"]),
        ("beamformer voltage monitor alarm", ["48 volt rail sag under load"],
         ["test rails under scanning load", "replace supply module"]),
        ("safe mode entered automatically", ["previous boot failed twice"],
         ["read boot failure code", "run extended self test"]),
        ("extended self test aborted", ["thermal limit during test"],
         ["cool system", "clean air filter", "repeat test"]),
        ("image store verification mismatch", ["disk write fault"],
         ["back up studies", "replace internal disk"]),
        ("beam steering angle limited", ["probe element failures at array edge"],
         ["run continuity test", "replace probe if clustered"]),
    ]

    for i, (desc, causes, actions) in enumerate(system_faults, start=1):
        add(f"E-{i:03d}", f"System fault: {desc}", causes, actions)
    for i, (desc, causes, actions) in enumerate(probe_faults, start=101):
        add(f"P-{i}", f"Probe fault: {desc}", causes, actions)
    for i, (desc, causes, actions) in enumerate(imaging_faults, start=201):
        add(f"I-{i}", f"Imaging fault: {desc}", causes, actions)
    assert len(rows) == 90, len(rows)
    return rows


# --------------------------------------------------------------------------
# 30 instructional cases: case_id | query | gold phrase (verbatim in corpus)
# --------------------------------------------------------------------------

CASES = [
    ("q01", "How much clearance does the scanner need behind the rear vents?",
     "at least ten centimeters of clearance behind the rear vents"),
    ("q02", "Can I plug the ultrasound scanner into an extension cord?",
     "Never use extension cords or multi-socket adapters"),
    ("q03", "How long does a normal boot of the system take?",
     "A normal start takes about ninety seconds"),
    ("q04", "What does pressing the depth knob do on the control panel?",
     "pressing the depth knob returns depth to the preset default"),
    ("q05", "How should the time gain compensation sliders be arranged?",
     "the sliders should form a gentle curve, not a zigzag"),
    ("q06", "Where should the focus marker be placed relative to the region of interest?",
     "place the focus marker at or slightly below that region"),
    ("q07", "How many frames does the cine buffer keep after freezing?",
     "keeps the last four hundred frames in the cine buffer"),
    ("q08", "How do I clean the transducer after an examination?",
     "wipe the lens and housing with a low-level disinfectant wipe"),
    ("q09", "What disinfection level do endocavity probes require?",
     "endocavity probes require high-level disinfection after each use"),
    ("q10", "How tightly can a probe cable be coiled for storage?",
     "never coiled tighter than a fifteen centimeter loop"),
    ("q11", "What is the maximum temperature for the gel warmer?",
     "the maximum warmer temperature is forty degrees Celsius"),
    ("q12", "What happens when the internal disk fills up completely?",
     "a full disk blocks new image storage mid-exam"),
    ("q13", "When is it safe to remove the USB device after an export?",
     "Do not remove the USB device while the transfer lamp blinks"),
    ("q14", "Who is allowed to delete studies from the scanner?",
     "Only users with the archive role can delete studies"),
    ("q15", "How often should the monitor calibration pattern be run?",
     "Run the monitor calibration pattern monthly"),
    ("q16", "Do annotations become permanent on stored images?",
     "Annotations burn into stored images"),
    ("q17", "How do I measure the area of an irregular shape?",
     "For irregular outlines use the trace method"),
    ("q18", "Can a report be edited after the study is closed?",
     "once the study is closed the report is locked"),
    ("q19", "What causes the cursor to jump during measurements?",
     "grit in the rollers is the usual cause of cursor jumping"),
    ("q20", "How often must the intake air filter be cleaned in dusty sites?",
     "cleaned every month in dusty sites"),
    ("q21", "How long should I wait after disconnecting mains before opening the supply?",
     "wait five minutes for the bulk capacitors to discharge"),
    ("q22", "What fuse rating does the scanner line fuse drawer take?",
     "T6.3A 250V time-delay cartridges"),
    ("q23", "When should the backup battery be replaced?",
     "A battery older than three years no longer holds the cache"),
    ("q24", "How close to nominal must the voltage rails read at idle?",
     "each rail must read within five percent of nominal"),
    ("q25", "What should I do about bent pins in the probe receptacle?",
     "straightened once with the pin tool"),
    ("q26", "How many open elements are acceptable on a general imaging probe?",
     "Up to two isolated open elements are acceptable"),
    ("q27", "What do boot failure codes starting with P indicate?",
     "codes beginning with P to probe path faults"),
    ("q28", "How do I start the system in safe mode?",
     "Holding the freeze key during power-on starts the system in safe mode"),
    ("q29", "What temperature range must the phantom be in for gain calibration?",
     "outside 18 to 26 degrees Celsius"),
    ("q30", "What torque do the card cage screws take?",
     "Card cage screws take 0.8 newton meters"),
]

# --------------------------------------------------------------------------
# sample device log with ground truth
# --------------------------------------------------------------------------


def write_sample_log(path: Path, truth_path: Path, codes: list[str]):
    rng = random.Random(4242)
    severities = ["debug", "info", "info", "info", "warning", "error", "fatal"]
    messages = [
        "scan converter pipeline idle",
        "preset loaded",
        "probe connected on port A",
        "study saved to internal disk",
        "fan speed adjusted",
        "temperature reading nominal",
        "transmit table reloaded",
        "frame rate stabilized",
        "archive export finished",
        "worklist refresh complete",
    ]
    planted_codes = {codes[0]: 37, codes[3]: 21, codes[7]: 21, codes[12]: 9, codes[25]: 5}
    n_lines = 10000
    n_malformed = 180
    code_lines = []
    for code, count in planted_codes.items():
        code_lines += [code] * count
    slots = rng.sample(range(n_lines), len(code_lines) + n_malformed)
    code_slots = dict(zip(slots[: len(code_lines)], code_lines))
    malformed_slots = set(slots[len(code_lines) :])

    sev_counts = {}
    lines = []
    base = 1766000000  # fixed epoch start so regeneration is stable
    for i in range(n_lines):
        ts = base + i * 7
        iso = f"2025-12-{13 + (i // 86400)}T{(ts // 3600) % 24:02d}:{(ts // 60) % 60:02d}:{ts % 60:02d}Z"
        if i in malformed_slots:
            lines.append(rng.choice([
                "corrupted buffer @@@@",
                "no timestamp here WARNING something",
                f"{iso}",
                "###",
            ]))
            continue
        sev = rng.choice(severities)
        sev_counts[sev] = sev_counts.get(sev, 0) + 1
        code = code_slots.get(i)
        tag = f"[{code}] " if code else ""
        lines.append(f"{iso} {sev.upper()} {tag}{rng.choice(messages)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    truth_path.write_text(
        json.dumps(
            {
                "total_lines": n_lines,
                "malformed": n_malformed,
                "parsed": n_lines - n_malformed,
                "severity_counts": sev_counts,
                "code_counts": planted_codes,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )


# --------------------------------------------------------------------------


def main():
    docs_dir = ROOT / "docs"
    docs_dir.mkdir(parents=True, exist_ok=True)
    (ROOT / "selftest").mkdir(exist_ok=True)
    (ROOT / "maintenance").mkdir(exist_ok=True)

    manifest = ["# Desk corpus manifest: path | device_model | doc_class | language | title"]
    for doc_id, title, sections in UM_DOCS:
        body = "\n\n".join(f"# {h}\n\n{t}" for h, t in sections) + "\n"
        (docs_dir / f"{doc_id}.md").write_text(body, encoding="utf-8")
        manifest.append(f"docs/{doc_id}.md | {MODEL} | user_manual | en | {title}")
    for doc_id, title, sections in SM_DOCS:
        body = "\n\n".join(f"# {h}\n\n{t}" for h, t in sections) + "\n"
        (docs_dir / f"{doc_id}.md").write_text(body, encoding="utf-8")
        manifest.append(f"docs/{doc_id}.md | {MODEL} | service_manual | en | {title}")

    rows = build_catalog_rows()
    catalog_body = (
        "# USX-300 error code catalog\n"
        "# raw_code | description | causes | corrective actions\n" + "\n".join(rows) + "\n"
    )
    (docs_dir / "ec-usx300-catalog.md").write_text(catalog_body, encoding="utf-8")
    manifest.append(f"docs/ec-usx300-catalog.md | {MODEL} | error_catalog | en | Error Code Catalog")
    (ROOT / "manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")

    cases = ["# case_id | query | gold_phrase"]
    cases += [f"{cid} | {q} | {phrase}" for cid, q, phrase in CASES]
    (ROOT / "eval_cases.txt").write_text("\n".join(cases) + "\n", encoding="utf-8")

    (ROOT / "selftest" / f"{MODEL}.txt").write_text(
        "# step_id | instruction | expected\n"
        "st-01 | Power the system on and observe the status lamp | Lamp turns steady green within two minutes\n"
        "st-02 | Check the boot screen segment counter completes | Counter reaches the last segment without a code\n"
        "st-03 | Connect the reference probe to port A and confirm recognition | Probe name appears in the title bar\n"
        "st-04 | Open the service menu and read the voltage rails | All rails within five percent of nominal\n"
        "st-05 | Run the probe cable continuity test with the test cap | No clustered open or shorted elements\n"
        "st-06 | Couple the probe to the phantom and freeze a uniform image | No dropout lines or noise bands visible\n",
        encoding="utf-8",
    )

    (ROOT / "maintenance" / f"{MODEL}.txt").write_text(
        "# task_id | title | interval_days\n"
        "mt-filter | Clean intake air filter | 30\n"
        "mt-phantom | Phantom image quality assurance | 30\n"
        "mt-monitor | Monitor calibration pattern check | 30\n"
        "mt-trackball | Clean trackball and rollers | 7\n"
        "mt-battery | Backup battery hold-time test | 180\n"
        "mt-pm | Full preventive maintenance visit | 365\n",
        encoding="utf-8",
    )

    codes = [r.split(" | ")[0] for r in rows]
    write_sample_log(ROOT / "sample_device.log", ROOT / "sample_device.log.truth.json", codes)

    (ROOT / "desk.conf").write_text(
        "# devicedesk desk-corpus configuration\n"
        "data_dir = data\n"
        "manifest = manifest.txt\n"
        "eval_cases_path = eval_cases.txt\n"
        "selftest_dir = selftest\n"
        "maintenance_profile_dir = maintenance\n"
        f"default_model = {MODEL}\n"
        "embedder_seed = 1234\n"
        "embedder_dimension = 4096\n"
        "hnsw_level_seed = 7\n"
        "tau_intent = 0.15\n"
        "tau_ground = 0.18\n"
        "default_k = 5\n"
        "kiosk_mode = true\n"
        "admin_token = desk-admin-token\n"
        "log_salt = desk-salt\n",
        encoding="utf-8",
    )
    print(f"desk corpus written under {ROOT}")


if __name__ == "__main__":
    main()
