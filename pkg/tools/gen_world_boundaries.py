#!/usr/bin/env python3
"""Generate the offline world-boundary fixture (258 entries).

Each entry is a simple lon/lat box around an approximate centroid; the
fixture exists to make geographic classification reproducible offline, not
to be cartographically accurate. Output: src/climkg/data/world_boundaries.geojson
"""

import json
from pathlib import Path

# name, continent, centroid lon, centroid lat, box width deg, box height deg
TABLE = [
    # --- Africa ---
    ("Algeria", "Africa", 2.6, 28.0, 18, 14),
    ("Angola", "Africa", 17.5, -12.3, 12, 10),
    ("Benin", "Africa", 2.3, 9.6, 3, 6),
    ("Botswana", "Africa", 24.7, -22.2, 8, 7),
    ("Burkina Faso", "Africa", -1.7, 12.2, 6, 4),
    ("Burundi", "Africa", 29.9, -3.4, 2, 2),
    ("Cabo Verde", "Africa", -23.6, 15.1, 2, 2),
    ("Cameroon", "Africa", 12.7, 5.7, 6, 8),
    ("Central African Republic", "Africa", 20.9, 6.6, 10, 5),
    ("Chad", "Africa", 18.7, 15.4, 10, 12),
    ("Comoros", "Africa", 43.9, -11.9, 1, 1),
    ("Congo", "Africa", 15.2, -0.7, 6, 6),
    ("Democratic Republic of the Congo", "Africa", 23.6, -2.9, 16, 14),
    ("Djibouti", "Africa", 42.6, 11.7, 2, 2),
    ("Egypt", "Africa", 30.2, 26.5, 10, 8),
    ("Equatorial Guinea", "Africa", 10.3, 1.7, 2, 2),
    ("Eritrea", "Africa", 38.8, 15.2, 5, 4),
    ("Eswatini", "Africa", 31.5, -26.5, 2, 2),
    ("Ethiopia", "Africa", 39.6, 8.6, 12, 9),
    ("Gabon", "Africa", 11.8, -0.6, 5, 5),
    ("Gambia", "Africa", -15.4, 13.4, 3, 1),
    ("Ghana", "Africa", -1.2, 7.9, 4, 6),
    ("Guinea", "Africa", -11.0, 10.4, 6, 4),
    ("Guinea-Bissau", "Africa", -15.2, 12.0, 2, 2),
    ("Ivory Coast", "Africa", -5.6, 7.5, 6, 5),
    ("Kenya", "Africa", 37.9, 0.6, 8, 8),
    ("Lesotho", "Africa", 28.2, -29.6, 3, 2),
    ("Liberia", "Africa", -9.3, 6.4, 4, 4),
    ("Libya", "Africa", 17.2, 27.0, 16, 10),
    ("Madagascar", "Africa", 46.7, -19.4, 7, 12),
    ("Malawi", "Africa", 34.3, -13.2, 3, 7),
    ("Mali", "Africa", -4.0, 17.6, 14, 10),
    ("Mauritania", "Africa", -10.3, 20.3, 12, 9),
    ("Mauritius", "Africa", 57.6, -20.3, 1, 1),
    ("Mayotte", "Africa", 45.2, -12.8, 1, 1),
    ("Morocco", "Africa", -6.3, 31.9, 8, 7),
    ("Mozambique", "Africa", 35.5, -17.3, 9, 13),
    ("Namibia", "Africa", 17.2, -22.1, 10, 9),
    ("Niger", "Africa", 9.4, 17.4, 12, 9),
    ("Nigeria", "Africa", 8.1, 9.6, 10, 8),
    ("Reunion", "Africa", 55.5, -21.1, 1, 1),
    ("Rwanda", "Africa", 29.9, -2.0, 2, 2),
    ("Saint Helena", "Africa", -5.7, -15.9, 1, 1),
    ("Sao Tome and Principe", "Africa", 6.6, 0.2, 1, 1),
    ("Senegal", "Africa", -14.5, 14.4, 6, 4),
    ("Seychelles", "Africa", 55.5, -4.7, 1, 1),
    ("Sierra Leone", "Africa", -11.8, 8.5, 3, 3),
    ("Somalia", "Africa", 45.9, 6.1, 9, 11),
    ("South Africa", "Africa", 25.1, -29.0, 14, 10),
    ("South Sudan", "Africa", 30.2, 7.3, 9, 6),
    ("Sudan", "Africa", 30.0, 15.6, 13, 10),
    ("Tanzania", "Africa", 34.8, -6.4, 10, 9),
    ("Togo", "Africa", 0.9, 8.5, 2, 5),
    ("Tunisia", "Africa", 9.6, 34.1, 4, 6),
    ("Uganda", "Africa", 32.4, 1.3, 5, 5),
    ("Western Sahara", "Africa", -12.9, 24.2, 6, 6),
    ("British Indian Ocean Territory", "Africa", 72.4, -7.3, 1, 1),
    ("Zambia", "Africa", 27.8, -13.5, 10, 7),
    ("Zimbabwe", "Africa", 29.9, -19.0, 7, 5),
    # --- Asia ---
    ("Afghanistan", "Asia", 66.0, 33.8, 11, 7),
    ("Armenia", "Asia", 45.0, 40.3, 3, 2),
    ("Azerbaijan", "Asia", 47.5, 40.3, 5, 3),
    ("Bahrain", "Asia", 50.5, 26.0, 1, 1),
    ("Bangladesh", "Asia", 90.2, 23.8, 4, 4),
    ("Bhutan", "Asia", 90.4, 27.4, 3, 2),
    ("Brunei", "Asia", 114.7, 4.5, 2, 1),
    ("Cambodia", "Asia", 104.9, 12.7, 5, 4),
    ("China", "Asia", 104.0, 35.9, 40, 25),
    ("Cyprus", "Asia", 33.2, 35.0, 2, 1),
    ("Georgia", "Asia", 43.5, 42.2, 5, 2),
    ("Hong Kong", "Asia", 114.2, 22.4, 1, 1),
    ("India", "Asia", 79.6, 22.9, 22, 22),
    ("Indonesia", "Asia", 117.0, -2.2, 36, 12),
    ("Iran", "Asia", 54.3, 32.6, 16, 12),
    ("Iraq", "Asia", 43.8, 33.0, 8, 7),
    ("Israel", "Asia", 35.0, 31.5, 2, 3),
    ("Japan", "Asia", 138.0, 36.5, 10, 14),
    ("Jordan", "Asia", 36.8, 31.3, 4, 4),
    ("Kazakhstan", "Asia", 67.3, 48.2, 28, 12),
    ("Kuwait", "Asia", 47.6, 29.3, 2, 2),
    ("Kyrgyzstan", "Asia", 74.5, 41.5, 8, 3),
    ("Laos", "Asia", 103.8, 18.5, 5, 8),
    ("Lebanon", "Asia", 35.9, 33.9, 1, 2),
    ("Macau", "Asia", 113.5, 22.2, 1, 1),
    ("Malaysia", "Asia", 109.7, 3.8, 16, 5),
    ("Maldives", "Asia", 73.4, 3.2, 1, 4),
    ("Mongolia", "Asia", 103.1, 46.8, 24, 9),
    ("Myanmar", "Asia", 96.5, 21.2, 9, 15),
    ("Nepal", "Asia", 83.9, 28.3, 7, 3),
    ("North Korea", "Asia", 127.2, 40.1, 5, 4),
    ("Oman", "Asia", 56.1, 20.6, 7, 8),
    ("Pakistan", "Asia", 69.4, 29.9, 12, 11),
    ("Palestine", "Asia", 35.2, 31.9, 1, 1),
    ("Philippines", "Asia", 122.9, 11.8, 9, 14),
    ("Qatar", "Asia", 51.2, 25.3, 1, 2),
    ("Saudi Arabia", "Asia", 44.5, 24.1, 18, 14),
    ("Singapore", "Asia", 103.8, 1.35, 1, 1),
    ("South Korea", "Asia", 127.8, 36.4, 4, 4),
    ("Sri Lanka", "Asia", 80.7, 7.6, 3, 4),
    ("Syria", "Asia", 38.5, 35.0, 6, 4),
    ("Taiwan", "Asia", 121.0, 23.7, 2, 3),
    ("Tajikistan", "Asia", 71.0, 38.9, 7, 3),
    ("Thailand", "Asia", 101.0, 15.1, 8, 13),
    ("Timor-Leste", "Asia", 125.9, -8.8, 2, 1),
    ("Turkey", "Asia", 35.2, 39.1, 16, 6),
    ("Turkmenistan", "Asia", 59.4, 39.1, 11, 6),
    ("United Arab Emirates", "Asia", 54.3, 23.9, 5, 3),
    ("Uzbekistan", "Asia", 63.1, 41.4, 14, 6),
    ("Vietnam", "Asia", 106.3, 16.6, 7, 15),
    ("Yemen", "Asia", 47.6, 15.9, 10, 5),
    # --- Europe ---
    ("Aland Islands", "Europe", 19.9, 60.2, 1, 1),
    ("Albania", "Europe", 20.0, 41.1, 2, 3),
    ("Andorra", "Europe", 1.6, 42.5, 1, 1),
    ("Austria", "Europe", 14.1, 47.6, 7, 3),
    ("Belarus", "Europe", 28.0, 53.5, 9, 5),
    ("Belgium", "Europe", 4.6, 50.6, 3, 2),
    ("Bosnia and Herzegovina", "Europe", 17.8, 44.2, 4, 3),
    ("Bulgaria", "Europe", 25.2, 42.8, 7, 3),
    ("Croatia", "Europe", 16.4, 45.1, 5, 3),
    ("Czechia", "Europe", 15.3, 49.7, 7, 3),
    ("Denmark", "Europe", 10.0, 56.0, 5, 3),
    ("Estonia", "Europe", 25.5, 58.7, 6, 3),
    ("Faroe Islands", "Europe", -6.9, 62.0, 1, 1),
    ("Finland", "Europe", 26.3, 64.5, 10, 11),
    ("France", "Europe", 2.5, 46.6, 12, 10),
    ("Germany", "Europe", 10.4, 51.1, 8, 8),
    ("Gibraltar", "Europe", -5.35, 36.1, 1, 1),
    ("Greece", "Europe", 23.0, 39.1, 8, 7),
    ("Guernsey", "Europe", -2.6, 49.45, 1, 1),
    ("Hungary", "Europe", 19.4, 47.2, 7, 3),
    ("Iceland", "Europe", -18.6, 65.0, 9, 4),
    ("Ireland", "Europe", -8.1, 53.2, 4, 4),
    ("Isle of Man", "Europe", -4.5, 54.2, 1, 1),
    ("Italy", "Europe", 12.1, 42.8, 10, 10),
    ("Jersey", "Europe", -2.1, 49.2, 1, 1),
    ("Kosovo", "Europe", 20.9, 42.6, 2, 2),
    ("Latvia", "Europe", 24.9, 56.9, 7, 3),
    ("Liechtenstein", "Europe", 9.55, 47.15, 1, 1),
    ("Lithuania", "Europe", 23.9, 55.3, 6, 3),
    ("Luxembourg", "Europe", 6.1, 49.8, 1, 1),
    ("Malta", "Europe", 14.4, 35.9, 1, 1),
    ("Moldova", "Europe", 28.5, 47.2, 3, 3),
    ("Monaco", "Europe", 7.4, 43.7, 1, 1),
    ("Montenegro", "Europe", 19.3, 42.8, 2, 2),
    ("Netherlands", "Europe", 5.3, 52.1, 3, 3),
    ("North Macedonia", "Europe", 21.7, 41.6, 3, 2),
    ("Norway", "Europe", 9.0, 62.0, 12, 14),
    ("Poland", "Europe", 19.4, 52.1, 10, 6),
    ("Portugal", "Europe", -8.2, 39.6, 3, 6),
    ("Romania", "Europe", 25.0, 45.9, 9, 5),
    ("Russia", "Europe", 97.0, 62.0, 80, 26),
    ("San Marino", "Europe", 12.45, 43.95, 1, 1),
    ("Serbia", "Europe", 20.8, 44.2, 4, 4),
    ("Slovakia", "Europe", 19.5, 48.7, 6, 2),
    ("Slovenia", "Europe", 14.8, 46.1, 3, 2),
    ("Spain", "Europe", -3.6, 40.2, 12, 8),
    ("Svalbard", "Europe", 18.0, 78.5, 14, 4),
    ("Sweden", "Europe", 16.7, 62.8, 9, 13),
    ("Switzerland", "Europe", 8.2, 46.8, 4, 2),
    ("Ukraine", "Europe", 31.4, 48.9, 18, 8),
    ("United Kingdom", "Europe", -2.9, 54.2, 8, 10),
    ("Vatican City", "Europe", 12.45, 41.9, 1, 1),
    # --- North America ---
    ("Anguilla", "North America", -63.1, 18.2, 1, 1),
    ("Antigua and Barbuda", "North America", -61.8, 17.3, 1, 1),
    ("Aruba", "North America", -69.97, 12.5, 1, 1),
    ("Bahamas", "North America", -77.4, 24.2, 5, 5),
    ("Barbados", "North America", -59.55, 13.2, 1, 1),
    ("Belize", "North America", -88.7, 17.2, 2, 3),
    ("Bermuda", "North America", -64.75, 32.3, 1, 1),
    ("British Virgin Islands", "North America", -64.6, 18.4, 1, 1),
    ("Canada", "North America", -98.0, 60.0, 76, 22),
    ("Caribbean Netherlands", "North America", -68.3, 12.2, 1, 1),
    ("Clipperton Island", "North America", -109.2, 10.3, 1, 1),
    ("Cayman Islands", "North America", -81.2, 19.3, 1, 1),
    ("Costa Rica", "North America", -84.2, 9.9, 3, 3),
    ("Cuba", "North America", -79.5, 21.5, 10, 3),
    ("Curacao", "North America", -69.0, 12.2, 1, 1),
    ("Dominica", "North America", -61.35, 15.4, 1, 1),
    ("Dominican Republic", "North America", -70.5, 18.9, 4, 2),
    ("El Salvador", "North America", -88.9, 13.7, 3, 2),
    ("Greenland", "North America", -42.0, 72.0, 40, 20),
    ("Grenada", "North America", -61.68, 12.1, 1, 1),
    ("Guadeloupe", "North America", -61.55, 16.25, 1, 1),
    ("Guatemala", "North America", -90.4, 15.7, 4, 4),
    ("Haiti", "North America", -72.7, 19.0, 3, 2),
    ("Honduras", "North America", -86.6, 14.8, 6, 3),
    ("Jamaica", "North America", -77.3, 18.1, 2, 1),
    ("Martinique", "North America", -61.0, 14.65, 1, 1),
    ("Mexico", "North America", -102.5, 23.9, 26, 16),
    ("Montserrat", "North America", -62.2, 16.75, 1, 1),
    ("Nicaragua", "North America", -85.0, 12.9, 5, 4),
    ("Panama", "North America", -80.1, 8.5, 6, 2),
    ("Puerto Rico", "North America", -66.4, 18.2, 2, 1),
    ("Saint Barthelemy", "North America", -62.83, 17.9, 1, 1),
    ("Saint Kitts and Nevis", "North America", -62.75, 17.3, 1, 1),
    ("Saint Lucia", "North America", -60.97, 13.9, 1, 1),
    ("Saint Martin", "North America", -63.06, 18.08, 1, 1),
    ("Saint Pierre and Miquelon", "North America", -56.3, 46.9, 1, 1),
    ("Saint Vincent and the Grenadines", "North America", -61.2, 13.25, 1, 1),
    ("Sint Maarten", "North America", -63.05, 18.03, 1, 1),
    ("Trinidad and Tobago", "North America", -61.3, 10.7, 2, 2),
    ("Turks and Caicos Islands", "North America", -71.8, 21.8, 1, 1),
    ("United States", "North America", -97.0, 38.0, 56, 24),
    ("United States Virgin Islands", "North America", -64.8, 17.73, 1, 1),
    # --- South America ---
    ("Argentina", "South America", -65.2, -35.4, 16, 28),
    ("Bolivia", "South America", -64.7, -16.7, 11, 10),
    ("Brazil", "South America", -53.1, -10.8, 35, 30),
    ("Chile", "South America", -71.3, -37.7, 5, 30),
    ("Colombia", "South America", -73.1, 3.9, 11, 12),
    ("Ecuador", "South America", -78.8, -1.4, 5, 5),
    ("Falkland Islands", "South America", -59.5, -51.8, 3, 2),
    ("French Guiana", "South America", -53.2, 3.9, 3, 3),
    ("Guyana", "South America", -58.9, 4.8, 4, 6),
    ("Paraguay", "South America", -58.4, -23.2, 7, 7),
    ("Peru", "South America", -74.4, -9.2, 11, 14),
    ("South Georgia", "South America", -36.5, -54.4, 2, 1),
    ("Suriname", "South America", -55.9, 4.1, 3, 4),
    ("Uruguay", "South America", -56.0, -32.8, 4, 4),
    ("Venezuela", "South America", -66.2, 7.1, 13, 8),
    # --- Oceania ---
    ("American Samoa", "Oceania", -170.7, -14.3, 1, 1),
    ("Australia", "Oceania", 134.5, -25.7, 36, 25),
    ("Christmas Island", "Oceania", 105.7, -10.5, 1, 1),
    ("Cocos Islands", "Oceania", 96.85, -12.15, 1, 1),
    ("Cook Islands", "Oceania", -159.8, -21.2, 1, 1),
    ("Fiji", "Oceania", 178.0, -17.8, 3, 3),
    ("French Polynesia", "Oceania", -149.4, -17.7, 3, 3),
    ("Guam", "Oceania", 144.8, 13.45, 1, 1),
    ("Kiribati", "Oceania", 173.0, 1.4, 3, 3),
    ("Marshall Islands", "Oceania", 168.7, 7.1, 3, 3),
    ("Micronesia", "Oceania", 158.2, 6.9, 4, 2),
    ("Nauru", "Oceania", 166.93, -0.52, 1, 1),
    ("New Caledonia", "Oceania", 165.5, -21.3, 3, 2),
    ("New Zealand", "Oceania", 172.8, -41.5, 10, 12),
    ("Niue", "Oceania", -169.87, -19.05, 1, 1),
    ("Norfolk Island", "Oceania", 167.95, -29.03, 1, 1),
    ("Northern Mariana Islands", "Oceania", 145.6, 15.2, 1, 2),
    ("Palau", "Oceania", 134.5, 7.5, 1, 2),
    ("Papua New Guinea", "Oceania", 144.3, -6.5, 10, 8),
    ("Pitcairn Islands", "Oceania", -128.3, -24.4, 1, 1),
    ("Samoa", "Oceania", -172.4, -13.75, 1, 1),
    ("Solomon Islands", "Oceania", 160.2, -9.6, 6, 4),
    ("Tokelau", "Oceania", -171.8, -9.2, 1, 1),
    ("Tonga", "Oceania", -175.2, -21.2, 1, 2),
    ("Tuvalu", "Oceania", 179.2, -7.5, 1, 1),
    ("Vanuatu", "Oceania", 167.3, -16.3, 2, 4),
    ("Wallis and Futuna", "Oceania", -177.2, -13.3, 1, 1),
    ("Wake Island", "Oceania", 166.6, 19.3, 1, 1),
    ("Midway Islands", "Oceania", -177.4, 28.2, 1, 1),
    ("Johnston Atoll", "Oceania", -169.5, 16.7, 1, 1),
    ("Baker Island", "Oceania", -176.5, 0.2, 1, 1),
    ("Howland Island", "Oceania", -176.6, 0.8, 1, 1),
    ("Jarvis Island", "Oceania", -160.0, -0.4, 1, 1),
    ("Palmyra Atoll", "Oceania", -162.1, 5.9, 1, 1),
    # --- Antarctica ---
    ("Antarctica", "Antarctica", 0.0, -82.0, 340, 16),
    ("Bouvet Island", "Antarctica", 3.36, -54.42, 1, 1),
    ("French Southern Territories", "Antarctica", 69.3, -49.3, 3, 2),
    ("Heard Island and McDonald Islands", "Antarctica", 73.5, -53.1, 1, 1),
    ("South Sandwich Islands", "Antarctica", -26.5, -57.8, 1, 2),
]


def box_ring(lon, lat, w, h):
    half_w, half_h = w / 2.0, h / 2.0
    west = max(-180.0, lon - half_w)
    east = min(180.0, lon + half_w)
    south = max(-90.0, lat - half_h)
    north = min(90.0, lat + half_h)
    return [
        [west, south],
        [east, south],
        [east, north],
        [west, north],
        [west, south],
    ]


def main():
    names = [row[0] for row in TABLE]
    assert len(names) == len(set(names)), "duplicate boundary names"
    assert len(TABLE) == 258, f"expected 258 entries, got {len(TABLE)}"
    features = [
        {
            "type": "Feature",
            "properties": {"name": name, "continent": continent},
            "geometry": {
                "type": "Polygon",
                "coordinates": [box_ring(lon, lat, w, h)],
            },
        }
        for name, continent, lon, lat, w, h in TABLE
    ]
    collection = {"type": "FeatureCollection", "features": features}
    out = Path(__file__).resolve().parents[1] / "src" / "climkg" / "data" / "world_boundaries.geojson"
    out.write_text(json.dumps(collection, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(features)} boundaries to {out}")


if __name__ == "__main__":
    main()
